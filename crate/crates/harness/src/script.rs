use std::fmt;
use std::str::FromStr;

use bptree::Order;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Key;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Insert(Key),
    Delete(Key),
    IsIn(Key),
    LRange(Key),
    IterAll,
}

impl Op {
    pub fn is_mutation(&self) -> bool {
        matches!(self, Op::Insert(_) | Op::Delete(_))
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Insert(v) => write!(f, "insert {v}"),
            Op::Delete(v) => write!(f, "delete {v}"),
            Op::IsIn(v) => write!(f, "isin {v}"),
            Op::LRange(v) => write!(f, "lrange {v}"),
            Op::IterAll => write!(f, "iter"),
        }
    }
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut toks = s.split_whitespace();
        let verb = toks.next().ok_or("empty op")?;
        let mut arg = || -> Result<Key, String> {
            toks.next()
                .ok_or(format!("`{verb}` needs a value"))?
                .parse()
                .map_err(|e| format!("bad value in `{s}`: {e}"))
        };
        Ok(match verb {
            "insert" => Op::Insert(arg()?),
            "delete" => Op::Delete(arg()?),
            "isin" => Op::IsIn(arg()?),
            "lrange" => Op::LRange(arg()?),
            "iter" => Op::IterAll,
            other => return Err(format!("unknown op `{other}`")),
        })
    }
}

/// A reproducible list of operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpScript {
    pub seed: u64,
    pub k: Order,
    pub ops: Vec<Op>,
}

impl OpScript {
    /// Keys are drawn from `0..4 * n_ops` so that repeats, re-inserts and
    /// deletes of present keys are common.
    pub fn generate(seed: u64, k: Order, n_ops: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let universe = (4 * n_ops).max(1) as Key;
        let ops = (0..n_ops)
            .map(|_| {
                let v = rng.gen_range(0..universe);
                match rng.gen_range(0..100) {
                    0..=39 => Op::Insert(v),
                    40..=64 => Op::Delete(v),
                    65..=79 => Op::IsIn(v),
                    80..=94 => Op::LRange(v),
                    _ => Op::IterAll,
                }
            })
            .collect();
        OpScript { seed, k, ops }
    }

    /// Text form, one op per line after a `# seed=<s> k=<k>` header.
    pub fn render(&self) -> String {
        let mut out = format!("# seed={} k={}\n", self.seed, self.k);
        for op in &self.ops {
            out.push_str(&op.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or("empty script")?;
        let mut seed = None;
        let mut k = None;
        for tok in header.trim_start_matches('#').split_whitespace() {
            if let Some(v) = tok.strip_prefix("seed=") {
                seed = v.parse().ok();
            } else if let Some(v) = tok.strip_prefix("k=") {
                k = v.parse().ok().and_then(|k| Order::new(k).ok());
            }
        }
        let (seed, k) = seed.zip(k).ok_or("header must be `# seed=<s> k=<k>`")?;
        let ops = lines.map(str::parse).collect::<Result<_, _>>()?;
        Ok(OpScript { seed, k, ops })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        let k = Order::new(2).unwrap();
        assert_eq!(OpScript::generate(42, k, 500), OpScript::generate(42, k, 500));
        assert_ne!(OpScript::generate(42, k, 500), OpScript::generate(43, k, 500));
        assert!(OpScript::generate(1, k, 0).ops.is_empty());
    }

    #[test]
    fn text_round_trip() {
        let s = OpScript::generate(7, Order::new(3).unwrap(), 100);
        assert_eq!(OpScript::parse(&s.render()).unwrap(), s);
        assert!(OpScript::parse("# seed=1\ninsert 3").is_err());
        assert!(OpScript::parse("# seed=1 k=1\nupsert 3").is_err());
    }
}
