//! Lockstep differential fuzzing.
//!
//! Each script runs against three implementations at once: the heap tree,
//! the algebraic model and `BTreeSet`. After every mutation the heap tree
//! must refine the model exactly; after every query all three must agree.

use std::collections::BTreeSet;
use std::fmt;
use std::panic::{self, AssertUnwindSafe};

use bptree::refinement::check_refinement;
use bptree::{AlgTree, Strategy, TreeRoot};

use crate::script::{Op, OpScript};
use crate::Key;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzSummary {
    pub ops: usize,
    pub mutations: usize,
    pub queries: usize,
    pub refinement_checks: usize,
    pub final_len: usize,
    pub final_height: usize,
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ops={} mutations={} queries={} refinement_checks={} final_len={} final_height={}",
            self.ops, self.mutations, self.queries, self.refinement_checks, self.final_len, self.final_height
        )
    }
}

/// First disagreement seen while running a script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub op_index: usize,
    pub op: Option<Op>,
    pub detail: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.op {
            Some(op) => write!(f, "op #{} `{op}`: {}", self.op_index, self.detail),
            None => write!(f, "op #{}: {}", self.op_index, self.detail),
        }
    }
}

/// Runs `script` in lockstep. A panic inside the tree counts as a
/// discrepancy at the op that raised it.
pub fn run(script: &OpScript, strategy: Strategy) -> Result<FuzzSummary, Discrepancy> {
    let mut at = 0;
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run_inner(script, strategy, &mut at)));
    match outcome {
        Ok(result) => result,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".to_string());
            Err(Discrepancy {
                op_index: at,
                op: script.ops.get(at).copied(),
                detail: format!("panicked: {msg}"),
            })
        }
    }
}

fn run_inner(script: &OpScript, strategy: Strategy, at: &mut usize) -> Result<FuzzSummary, Discrepancy> {
    let k = script.k;
    let mut heap = TreeRoot::new(k, strategy);
    let mut model: AlgTree<Key> = AlgTree::leaf([]);
    let mut oracle = BTreeSet::new();
    let mut summary = FuzzSummary::default();

    for (i, op) in script.ops.iter().enumerate() {
        *at = i;
        let fail = |detail: String| Discrepancy {
            op_index: i,
            op: Some(*op),
            detail,
        };
        match *op {
            Op::Insert(v) | Op::Delete(v) => {
                let (heap_changed, oracle_changed) = if let Op::Insert(_) = op {
                    model = model.insert(k, v);
                    (heap.insert(v), oracle.insert(v))
                } else {
                    model = model.delete(k, &v);
                    (heap.delete(&v), oracle.remove(&v))
                };
                if heap_changed != oracle_changed {
                    return Err(fail(format!(
                        "heap reports changed={heap_changed}, oracle changed={oracle_changed}"
                    )));
                }
                let report = check_refinement(&heap, &model);
                summary.refinement_checks += 1;
                if !report.ok {
                    let parts: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
                    return Err(fail(format!("refinement: {}", parts.join("; "))));
                }
                if model.leaves() != oracle.iter().copied().collect::<Vec<_>>() {
                    return Err(fail("model leaves differ from oracle set".into()));
                }
                summary.mutations += 1;
            }
            Op::IsIn(v) => {
                let answers = (heap.isin(&v), model.isin(&v), oracle.contains(&v));
                if !(answers.0 == answers.1 && answers.1 == answers.2) {
                    return Err(fail(format!("heap={} model={} oracle={}", answers.0, answers.1, answers.2)));
                }
                summary.queries += 1;
            }
            Op::LRange(v) => {
                let h: Vec<Key> = heap.lrange(&v).copied().collect();
                let m = model.lrange(&v);
                let o: Vec<Key> = oracle.range(v..).copied().collect();
                if h != o || m != o {
                    return Err(fail(format!("heap={h:?} model={m:?} oracle={o:?}")));
                }
                summary.queries += 1;
            }
            Op::IterAll => {
                let h: Vec<Key> = heap.values().copied().collect();
                let m = model.leaves();
                let o: Vec<Key> = oracle.iter().copied().collect();
                if h != o || m != o {
                    return Err(fail(format!("heap={h:?} model={m:?} oracle={o:?}")));
                }
                summary.queries += 1;
            }
        }
    }
    summary.ops = script.ops.len();
    summary.final_len = oracle.len();
    summary.final_height = heap.height();
    Ok(summary)
}

/// Greedily drops ops, largest chunks first, while the script still fails.
pub fn shrink(script: &OpScript, strategy: Strategy) -> OpScript {
    let mut best = script.clone();
    if let Err(d) = run(&best, strategy) {
        best.ops.truncate(d.op_index + 1);
    } else {
        return best;
    }
    let mut chunk = best.ops.len().next_power_of_two();
    while chunk >= 1 {
        let mut i = 0;
        while i < best.ops.len() {
            let mut candidate = best.clone();
            let end = (i + chunk).min(candidate.ops.len());
            candidate.ops.drain(i..end);
            if run(&candidate, strategy).is_err() {
                best = candidate;
            } else {
                i += chunk;
            }
        }
        chunk /= 2;
    }
    best
}

#[derive(Debug)]
pub enum FuzzOutcome {
    Passed(FuzzSummary),
    Failed {
        discrepancy: Discrepancy,
        minimized: OpScript,
    },
}

impl FuzzOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, FuzzOutcome::Passed(_))
    }
}

pub fn fuzz_script(script: &OpScript, strategy: Strategy) -> FuzzOutcome {
    match run(script, strategy) {
        Ok(summary) => FuzzOutcome::Passed(summary),
        Err(discrepancy) => {
            let hook = panic::take_hook();
            panic::set_hook(Box::new(|_| {}));
            let minimized = shrink(script, strategy);
            panic::set_hook(hook);
            FuzzOutcome::Failed { discrepancy, minimized }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bptree::Order;

    #[test]
    fn empty_script_passes() {
        let s = OpScript::generate(0, Order::new(1).unwrap(), 0);
        assert_eq!(run(&s, Strategy::Binary).unwrap(), FuzzSummary::default());
    }

    #[test]
    fn small_scripts_pass_for_both_strategies() {
        for seed in 0..20 {
            for k in [1, 2, 3] {
                let s = OpScript::generate(seed, Order::new(k).unwrap(), 200);
                for strat in Strategy::ALL {
                    let summary = run(&s, strat).unwrap();
                    assert_eq!(summary.ops, 200);
                    assert_eq!(summary.mutations + summary.queries, 200);
                }
            }
        }
    }
}
