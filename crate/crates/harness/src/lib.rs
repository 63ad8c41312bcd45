//! Driver code behind the `bpt` command: reproducible operation scripts,
//! a lockstep fuzzer that runs the heap tree, the algebraic model and
//! `BTreeSet` side by side, the dump checker and a small search benchmark.

pub mod bench;
pub mod check;
pub mod fuzz;
pub mod gen;
pub mod script;

pub use script::{Op, OpScript};

/// Value type the harness instantiates the tree with.
pub type Key = i64;

use bptree::{Strategy, TreeRoot};

/// Applies the mutations of `script` to a fresh heap tree; queries are
/// skipped.
pub fn build_tree(script: &OpScript, strategy: Strategy) -> TreeRoot<Key> {
    let mut tree = TreeRoot::new(script.k, strategy);
    for op in &script.ops {
        match *op {
            Op::Insert(v) => {
                tree.insert(v);
            }
            Op::Delete(v) => {
                tree.delete(&v);
            }
            Op::IsIn(_) | Op::LRange(_) | Op::IterAll => {}
        }
    }
    tree
}

/// The `dump` command's output for `(seed, k, n_ops)`.
pub fn dump_for(seed: u64, k: bptree::Order, n_ops: usize, strategy: Strategy) -> String {
    bptree::dump::render(&build_tree(&OpScript::generate(seed, k, n_ops), strategy))
}
