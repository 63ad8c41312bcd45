use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use bptree::{Order, Strategy};
use bptree_harness::bench::{self, BenchConfig};
use bptree_harness::check::check_dump;
use bptree_harness::fuzz::{fuzz_script, FuzzOutcome};
use bptree_harness::{dump_for, OpScript};
use clap::{Parser, Subcommand};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "bpt", about = "B+-tree fuzzer, checker, benchmark and dump tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a random script against heap tree, model and BTreeSet in lockstep.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "2", value_parser = parse_order)]
        k: Order,
        #[arg(long, default_value_t = 1000)]
        ops: usize,
        #[arg(long, default_value = "binary")]
        strategy: Strategy,
        /// Replay a script printed by an earlier failing run instead.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Check a dump file.
    Check { file: PathBuf },
    /// Time point queries and range inits per strategy; writes CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1,16,256")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        keys: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, value_delimiter = ',', default_value = "linear,binary")]
        strategies: Vec<Strategy>,
        #[arg(long, default_value_t = 10_000)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a tree from a fuzz script's mutations and write its dump.
    Dump {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "2", value_parser = parse_order)]
        k: Order,
        #[arg(long, default_value_t = 1000)]
        ops: usize,
        #[arg(long, default_value = "binary")]
        strategy: Strategy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_order(s: &str) -> Result<Order, String> {
    let k: usize = s.parse().map_err(|e| format!("{e}"))?;
    Order::new(k).map_err(|e| e.to_string())
}

fn write_out(out: Option<&PathBuf>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).context("writing stdout")
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Fuzz {
            seed,
            k,
            ops,
            strategy,
            replay,
        } => {
            let script = match replay {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    OpScript::parse(&text).map_err(anyhow::Error::msg)?
                }
                None => OpScript::generate(seed, k, ops),
            };
            match fuzz_script(&script, strategy) {
                FuzzOutcome::Passed(summary) => {
                    println!("fuzz ok seed={} k={} strategy={strategy} {summary}", script.seed, script.k);
                    Ok(0)
                }
                FuzzOutcome::Failed { discrepancy, minimized } => {
                    println!("fuzz FAILED seed={} k={} strategy={strategy}", script.seed, script.k);
                    println!("first failure: {discrepancy}");
                    println!("minimized script ({} ops), replay with --replay FILE:", minimized.ops.len());
                    print!("{}", minimized.render());
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Check { file } => {
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            match check_dump(&text) {
                Ok(report) => {
                    print!("{}", report.render());
                    let failed = report.lines.iter().filter(|l| !l.ok).count();
                    eprintln!("{} checks, {failed} failed", report.lines.len());
                    Ok(if report.ok() { 0 } else { EXIT_FAIL })
                }
                Err(e) => {
                    eprintln!("parse error: {e}");
                    Ok(EXIT_USAGE)
                }
            }
        }
        Command::Bench {
            k,
            keys,
            reps,
            strategies,
            probes,
            seed,
            out,
        } => {
            let cfg = BenchConfig {
                ks: k,
                n_keys: keys,
                strategies,
                reps,
                probes,
                seed,
            };
            let records = bench::run(&cfg)?;
            let mut buf = Vec::new();
            bench::write_csv(&records, &mut buf)?;
            write_out(out.as_ref(), &buf)?;
            Ok(0)
        }
        Command::Dump {
            seed,
            k,
            ops,
            strategy,
            out,
        } => {
            write_out(out.as_ref(), dump_for(seed, k, ops, strategy).as_bytes())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
