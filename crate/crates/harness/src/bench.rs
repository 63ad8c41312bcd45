//! Point-query and range-init timings per search strategy, with comparison
//! counts from the tree's instrumented comparator.

use std::time::Instant;

use bptree::{Order, Strategy, TreeRoot};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::Key;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub strategy: String,
    pub k: usize,
    pub n_keys: usize,
    pub op: String,
    pub mean_ns: f64,
    pub median_ns: f64,
    pub p99_ns: f64,
    pub comparisons_per_op: f64,
    pub max_comparisons_per_node: u64,
    pub height: usize,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ks: Vec<usize>,
    pub n_keys: usize,
    pub strategies: Vec<Strategy>,
    pub reps: usize,
    /// Probes timed per rep.
    pub probes: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ks: vec![1, 16, 256],
            n_keys: 1_000_000,
            strategies: Strategy::ALL.to_vec(),
            reps: 5,
            probes: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum OpKind {
    IsIn,
    LRangeInit,
}

impl OpKind {
    const ALL: [OpKind; 2] = [OpKind::IsIn, OpKind::LRangeInit];

    fn name(self) -> &'static str {
        match self {
            OpKind::IsIn => "isin",
            OpKind::LRangeInit => "lrange_init",
        }
    }
}

pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRecord>, bptree::Error> {
    let mut records = Vec::new();
    for &k in &cfg.ks {
        let order = Order::new(k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let universe = (4 * cfg.n_keys).max(1) as Key;
        let keys: Vec<Key> = (0..cfg.n_keys).map(|_| rng.gen_range(0..universe)).collect();
        let probes: Vec<Key> = (0..cfg.probes).map(|_| rng.gen_range(0..universe)).collect();
        for &strategy in &cfg.strategies {
            let mut tree = TreeRoot::new(order, strategy);
            for &key in &keys {
                tree.insert(key);
            }
            for kind in OpKind::ALL {
                records.push(measure(&tree, kind, &probes, cfg.reps, cfg.n_keys));
            }
        }
    }
    Ok(records)
}

fn measure(tree: &TreeRoot<Key>, kind: OpKind, probes: &[Key], reps: usize, n_keys: usize) -> BenchRecord {
    let run_one = |x: &Key| match kind {
        OpKind::IsIn => {
            std::hint::black_box(tree.isin(x));
        }
        OpKind::LRangeInit => {
            std::hint::black_box(tree.lrange_cursor(x));
        }
    };
    // Warm-up rep, discarded.
    probes.iter().for_each(run_one);

    tree.stats().reset();
    let mut samples = Vec::with_capacity(probes.len() * reps);
    for _ in 0..reps {
        for x in probes {
            let start = Instant::now();
            run_one(x);
            samples.push(start.elapsed().as_nanos() as f64);
        }
    }
    let counts = tree.stats().snapshot();
    samples.sort_by(f64::total_cmp);
    let n = samples.len().max(1);
    let pick = |q: f64| samples.get(((n - 1) as f64 * q).round() as usize).copied().unwrap_or(0.0);
    BenchRecord {
        strategy: tree.strategy().to_string(),
        k: tree.order().k(),
        n_keys,
        op: kind.name().to_string(),
        mean_ns: samples.iter().sum::<f64>() / n as f64,
        median_ns: pick(0.5),
        p99_ns: pick(0.99),
        comparisons_per_op: counts.comparisons as f64 / n as f64,
        max_comparisons_per_node: counts.max_per_visit,
        height: tree.height(),
    }
}

pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u64 {
    (usize::BITS - (n.max(1) - 1).leading_zeros()) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_row_per_k_strategy_and_op() {
        let cfg = BenchConfig {
            ks: vec![1, 4, 16],
            n_keys: 500,
            reps: 1,
            probes: 50,
            ..BenchConfig::default()
        };
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 3 * 2 * 2);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 13);
        assert!(text.starts_with("strategy,k,n_keys,op,"));
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(33), 6);
        assert_eq!(ceil_log2(513), 10);
    }
}
