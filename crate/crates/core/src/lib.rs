//! A B+-tree in two layers.
//!
//! [`model`] is a purely functional tree that serves as the reference
//! semantics. [`heap_tree`] is the efficient version: nodes live in an arena,
//! leaves are chained for scans, and node-internal search is pluggable
//! ([`navigation::Strategy`]). [`refinement`] relates the two by computing the
//! abstract value a heap tree stands for and checking the leaf chain against
//! the structural fringe. [`dump`] is the line-oriented text form of a heap
//! tree.

pub mod dump;
pub mod heap_tree;
pub mod model;
pub mod navigation;
pub mod refinement;

pub use heap_tree::{LeavesCursor, NodeHandle, TreeRoot};
pub use model::{AlgTree, InvariantReport, Order};
pub use navigation::Strategy;
pub use refinement::{Fringe, RefinementReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("node {handle} holds {fill} entries, capacity is {capacity}")]
    CapacityExceeded {
        handle: NodeHandle,
        fill: usize,
        capacity: usize,
    },
    #[error("handle {0} does not resolve to a live node")]
    DanglingHandle(NodeHandle),
    #[error("handle {0} repeats on a root-to-leaf path")]
    CyclicStructure(NodeHandle),
}
