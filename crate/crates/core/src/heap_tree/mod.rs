//! Arena-backed imperative B+-tree.
//!
//! Nodes live in a [`NodeStore`] and refer to each other through
//! [`NodeHandle`]s. Inner nodes keep `(child, separator)` pairs in a
//! [`PartialArray`] of capacity `2k` plus a last child; leaves keep their
//! values in a partial array and a link to the next leaf, so an in-order scan
//! never has to go back up the tree.
//!
//! Mutations need `&mut TreeRoot`; queries and iterators only borrow it. A
//! [`LeavesCursor`] can be detached from the borrow, in which case it is
//! stamped with the tree's mutation epoch and, when epoch checking is on
//! (`BPT_DEBUG_EPOCHS=1`), refuses to run after the tree has changed.

mod cursor;
mod mutate;
mod partial_array;
mod store;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

pub use cursor::{LeafIter, LeafView, LeavesCursor, Range};
pub use partial_array::{Full, PartialArray};
pub use store::{ImpNode, NodeHandle, NodeStore};

use crate::model::Order;
use crate::navigation::{Probe, Strategy};

/// Environment variable that turns on cursor-versus-mutation checking.
pub const DEBUG_EPOCHS_VAR: &str = "BPT_DEBUG_EPOCHS";

/// Comparison counters for node-internal searches.
#[derive(Debug, Default)]
pub struct NavStats {
    comparisons: AtomicU64,
    node_visits: AtomicU64,
    max_per_visit: AtomicU64,
}

/// Snapshot of [`NavStats`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NavCounts {
    pub comparisons: u64,
    pub node_visits: u64,
    pub max_per_visit: u64,
}

impl NavStats {
    fn record(&self, comparisons: u64) {
        self.comparisons.fetch_add(comparisons, AtomicOrdering::Relaxed);
        self.node_visits.fetch_add(1, AtomicOrdering::Relaxed);
        self.max_per_visit.fetch_max(comparisons, AtomicOrdering::Relaxed);
    }

    pub fn snapshot(&self) -> NavCounts {
        NavCounts {
            comparisons: self.comparisons.load(AtomicOrdering::Relaxed),
            node_visits: self.node_visits.load(AtomicOrdering::Relaxed),
            max_per_visit: self.max_per_visit.load(AtomicOrdering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.comparisons.store(0, AtomicOrdering::Relaxed);
        self.node_visits.store(0, AtomicOrdering::Relaxed);
        self.max_per_visit.store(0, AtomicOrdering::Relaxed);
    }
}

/// A heap-resident B+-tree: the arena, the root, and the cached leftmost leaf.
#[derive(Debug)]
pub struct TreeRoot<V> {
    order: Order,
    strategy: Strategy,
    store: NodeStore<V>,
    root: NodeHandle,
    first: NodeHandle,
    epoch: u64,
    check_epochs: bool,
    stats: NavStats,
}

fn epochs_from_env() -> bool {
    std::env::var(DEBUG_EPOCHS_VAR).is_ok_and(|v| v == "1")
}

impl<V> TreeRoot<V> {
    /// A tree holding one empty root leaf.
    pub fn new(order: Order, strategy: Strategy) -> Self {
        let mut store = NodeStore::new();
        let root = store.alloc(ImpNode::Leaf {
            values: PartialArray::new(order.capacity()),
            next: None,
        });
        Self::from_parts(order, strategy, store, root, root)
    }

    /// Assembles a tree from an existing store. Nothing is validated; use
    /// [`crate::refinement::check_view_split`] for that.
    pub fn from_parts(
        order: Order,
        strategy: Strategy,
        store: NodeStore<V>,
        root: NodeHandle,
        first: NodeHandle,
    ) -> Self {
        TreeRoot {
            order,
            strategy,
            store,
            root,
            first,
            epoch: 0,
            check_epochs: epochs_from_env(),
            stats: NavStats::default(),
        }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn root(&self) -> NodeHandle {
        self.root
    }

    /// The cached leftmost leaf; head of the leaf chain.
    pub fn first(&self) -> NodeHandle {
        self.first
    }

    pub fn store(&self) -> &NodeStore<V> {
        &self.store
    }

    /// Raw store access, for fault-injection tests.
    pub fn store_mut(&mut self) -> &mut NodeStore<V> {
        &mut self.store
    }

    pub fn set_first(&mut self, first: NodeHandle) {
        self.first = first;
    }

    /// Counts mutations; cursors compare against it.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn set_epoch_checks(&mut self, on: bool) {
        self.check_epochs = on;
    }

    pub fn epoch_checks(&self) -> bool {
        self.check_epochs
    }

    pub fn stats(&self) -> &NavStats {
        &self.stats
    }

    /// Handle of the leftmost leaf, found by always descending into the
    /// first child.
    pub fn first_leaf(&self) -> NodeHandle {
        let mut h = self.root;
        loop {
            match self.store.get(h) {
                ImpNode::Leaf { .. } => return h,
                node @ ImpNode::Inner { .. } => h = node.child(0),
            }
        }
    }

    /// Inner levels between the root and the leaves.
    pub fn height(&self) -> usize {
        let mut h = self.root;
        let mut height = 0;
        while let node @ ImpNode::Inner { .. } = self.store.get(h) {
            h = node.child(0);
            height += 1;
        }
        height
    }

    pub fn leaf_iter(&self) -> LeafIter<'_, V> {
        LeafIter::new(self)
    }

    /// Every value in order: the leaf chain flattened through each leaf's
    /// array.
    pub fn values(&self) -> impl Iterator<Item = &V> + '_ {
        self.leaf_iter().flat_map(|leaf| leaf.values.iter())
    }

    /// A detached cursor at the first value.
    pub fn cursor(&self) -> LeavesCursor {
        LeavesCursor::at(self, Some(self.first), 0)
    }

    /// Hash of everything a read-only operation must leave untouched.
    pub fn fingerprint(&self) -> u64
    where
        V: Hash,
    {
        let mut hasher = DefaultHasher::new();
        self.store.hash(&mut hasher);
        self.root.hash(&mut hasher);
        self.first.hash(&mut hasher);
        self.order.hash(&mut hasher);
        hasher.finish()
    }
}

impl<V: Ord> TreeRoot<V> {
    fn probe<T>(&self, items: &[T], x: &V, key: impl Fn(&T) -> &V) -> Probe {
        let mut comparisons = 0u64;
        let probe = self.strategy.search_by(items, x, key, &mut |a: &V, b: &V| {
            comparisons += 1;
            a.cmp(b)
        });
        self.stats.record(comparisons);
        probe
    }

    fn route(&self, entries: &PartialArray<(NodeHandle, V)>, x: &V) -> usize {
        self.probe(entries.as_slice(), x, |(_, sep)| sep).child()
    }

    pub fn isin(&self, x: &V) -> bool {
        let mut h = self.root;
        loop {
            match self.store.get(h) {
                ImpNode::Leaf { values, .. } => return self.probe(values.as_slice(), x, |v| v).exact,
                node @ ImpNode::Inner { entries, .. } => h = node.child(self.route(entries, x)),
            }
        }
    }

    /// The leaf `x` would live in. Following the chain from here to the end
    /// visits exactly the leaves holding values `>= x`, possibly preceded by
    /// this one.
    pub fn leaf_nodes_lrange(&self, x: &V) -> NodeHandle {
        let mut h = self.root;
        loop {
            match self.store.get(h) {
                ImpNode::Leaf { .. } => return h,
                node @ ImpNode::Inner { entries, .. } => h = node.child(self.route(entries, x)),
            }
        }
    }

    /// Iterator over all values `>= x`.
    pub fn lrange(&self, x: &V) -> Range<'_, V> {
        Range::new(self, self.lrange_cursor(x))
    }

    /// Detached form of [`TreeRoot::lrange`].
    pub fn lrange_cursor(&self, x: &V) -> LeavesCursor {
        let leaf = self.leaf_nodes_lrange(x);
        let pos = match self.store.get(leaf) {
            ImpNode::Leaf { values, .. } => self.probe(values.as_slice(), x, |v| v).index,
            ImpNode::Inner { .. } => unreachable!("descent ends at a leaf"),
        };
        LeavesCursor::at(self, Some(leaf), pos)
    }
}
