use super::partial_array::PartialArray;
use super::store::{ImpNode, NodeHandle};
use super::TreeRoot;

/// One leaf as seen by [`LeafIter`]: its array and its forward link.
#[derive(Debug)]
pub struct LeafView<'a, V> {
    pub handle: NodeHandle,
    pub values: &'a PartialArray<V>,
    pub next: Option<NodeHandle>,
}

/// Walks the leaf chain from the leftmost leaf to the end marker.
#[derive(Debug)]
pub struct LeafIter<'a, V> {
    tree: &'a TreeRoot<V>,
    current: Option<NodeHandle>,
}

impl<'a, V> LeafIter<'a, V> {
    pub(super) fn new(tree: &'a TreeRoot<V>) -> Self {
        LeafIter {
            tree,
            current: Some(tree.first()),
        }
    }

    /// Starts the walk at an arbitrary leaf.
    pub fn from_leaf(tree: &'a TreeRoot<V>, leaf: Option<NodeHandle>) -> Self {
        LeafIter { tree, current: leaf }
    }

    pub fn has_next(&self) -> bool {
        self.current.is_some()
    }

    /// The current leaf's values and its forward link; advances past it.
    ///
    /// Panics when the chain is exhausted.
    pub fn next_leaf(&mut self) -> (&'a [V], Option<NodeHandle>) {
        let view = self.advance().expect("leaf iterator exhausted");
        (view.values.as_slice(), view.next)
    }

    fn advance(&mut self) -> Option<LeafView<'a, V>> {
        let handle = self.current?;
        match self.tree.store().get(handle) {
            ImpNode::Leaf { values, next } => {
                self.current = *next;
                Some(LeafView {
                    handle,
                    values,
                    next: *next,
                })
            }
            ImpNode::Inner { .. } => panic!("leaf chain reaches inner node {handle}"),
        }
    }
}

impl<'a, V> Iterator for LeafIter<'a, V> {
    type Item = LeafView<'a, V>;

    fn next(&mut self) -> Option<Self::Item> {
        self.advance()
    }
}

/// Position in the value sequence of a tree: a leaf, an index into it, and
/// that leaf's fill.
///
/// A cursor never rests at the end of a non-final leaf; once `pos` reaches
/// `limit` it moves on, so `current` is `None` exactly when the cursor is
/// exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeavesCursor {
    current: Option<NodeHandle>,
    pos: usize,
    limit: usize,
    epoch: u64,
}

impl LeavesCursor {
    pub(super) fn at<V>(tree: &TreeRoot<V>, leaf: Option<NodeHandle>, pos: usize) -> Self {
        let mut c = LeavesCursor {
            current: leaf,
            pos,
            limit: 0,
            epoch: tree.epoch(),
        };
        c.limit = c.current.map_or(0, |h| fill_of(tree, h));
        c.settle(tree);
        c
    }

    pub fn current(&self) -> Option<NodeHandle> {
        self.current
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn is_exhausted(&self) -> bool {
        self.current.is_none()
    }

    /// Yields the next value of `tree`.
    ///
    /// With epoch checks on, panics if `tree` was mutated since the cursor
    /// was created.
    pub fn next<'a, V>(&mut self, tree: &'a TreeRoot<V>) -> Option<&'a V> {
        if tree.epoch_checks() {
            assert_eq!(
                self.epoch,
                tree.epoch(),
                "cursor used after the tree was mutated"
            );
        }
        let h = self.current?;
        let v = match tree.store().get(h) {
            ImpNode::Leaf { values, .. } => &values[self.pos],
            ImpNode::Inner { .. } => panic!("cursor on inner node {h}"),
        };
        self.pos += 1;
        self.settle(tree);
        Some(v)
    }

    fn settle<V>(&mut self, tree: &TreeRoot<V>) {
        while let Some(h) = self.current {
            if self.pos < self.limit {
                return;
            }
            let next = match tree.store().get(h) {
                ImpNode::Leaf { next, .. } => *next,
                ImpNode::Inner { .. } => panic!("cursor on inner node {h}"),
            };
            self.current = next;
            self.pos = 0;
            self.limit = next.map_or(0, |n| fill_of(tree, n));
        }
        self.pos = 0;
        self.limit = 0;
    }
}

fn fill_of<V>(tree: &TreeRoot<V>, h: NodeHandle) -> usize {
    match tree.store().get(h) {
        ImpNode::Leaf { values, .. } => values.len(),
        ImpNode::Inner { .. } => panic!("cursor on inner node {h}"),
    }
}

/// Borrowing iterator over a cursor.
#[derive(Debug)]
pub struct Range<'a, V> {
    tree: &'a TreeRoot<V>,
    cursor: LeavesCursor,
}

impl<'a, V> Range<'a, V> {
    pub(super) fn new(tree: &'a TreeRoot<V>, cursor: LeavesCursor) -> Self {
        Range { tree, cursor }
    }

    pub fn cursor(&self) -> LeavesCursor {
        self.cursor
    }
}

impl<'a, V> Iterator for Range<'a, V> {
    type Item = &'a V;

    fn next(&mut self) -> Option<&'a V> {
        self.cursor.next(self.tree)
    }
}
