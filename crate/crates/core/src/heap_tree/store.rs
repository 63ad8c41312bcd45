use std::fmt;

use super::partial_array::PartialArray;
use crate::Error;

/// Opaque reference to a node slot in a [`NodeStore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeHandle(u32);

impl NodeHandle {
    pub const fn new(index: u32) -> Self {
        NodeHandle(index)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A node as stored in the arena. `None` as a `next` link is the end of the
/// leaf chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ImpNode<V> {
    Inner {
        entries: PartialArray<(NodeHandle, V)>,
        last: NodeHandle,
    },
    Leaf {
        values: PartialArray<V>,
        next: Option<NodeHandle>,
    },
}

impl<V> ImpNode<V> {
    pub fn is_leaf(&self) -> bool {
        matches!(self, ImpNode::Leaf { .. })
    }

    pub fn fill(&self) -> usize {
        match self {
            ImpNode::Inner { entries, .. } => entries.len(),
            ImpNode::Leaf { values, .. } => values.len(),
        }
    }

    pub fn capacity(&self) -> usize {
        match self {
            ImpNode::Inner { entries, .. } => entries.capacity(),
            ImpNode::Leaf { values, .. } => values.capacity(),
        }
    }

    /// Child `i` of an inner node; `i == fill` is the last child.
    pub fn child(&self, i: usize) -> NodeHandle {
        match self {
            ImpNode::Inner { entries, last } => entries.get(i).map_or(*last, |(h, _)| *h),
            ImpNode::Leaf { .. } => panic!("leaf has no children"),
        }
    }

    /// All children of an inner node in order; empty for a leaf.
    pub fn children(&self) -> Vec<NodeHandle> {
        match self {
            ImpNode::Inner { entries, last } => entries
                .iter()
                .map(|(h, _)| *h)
                .chain(std::iter::once(*last))
                .collect(),
            ImpNode::Leaf { .. } => Vec::new(),
        }
    }
}

/// Arena of nodes. Freed slots go on a LIFO free list and are reused by the
/// next allocation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeStore<V> {
    slots: Vec<Option<ImpNode<V>>>,
    free: Vec<NodeHandle>,
}

impl<V> Default for NodeStore<V> {
    fn default() -> Self {
        NodeStore {
            slots: Vec::new(),
            free: Vec::new(),
        }
    }
}

impl<V> NodeStore<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&mut self, node: ImpNode<V>) -> NodeHandle {
        match self.free.pop() {
            Some(h) => {
                debug_assert!(self.slots[h.index()].is_none());
                self.slots[h.index()] = Some(node);
                h
            }
            None => {
                let h = NodeHandle(u32::try_from(self.slots.len()).expect("arena exhausted"));
                self.slots.push(Some(node));
                h
            }
        }
    }

    pub fn free(&mut self, h: NodeHandle) -> ImpNode<V> {
        let node = self.slots[h.index()].take().expect("double free");
        self.free.push(h);
        node
    }

    /// Installs `node` at a caller-chosen handle. Slots skipped over become
    /// free. Used when loading a tree from its textual form.
    pub fn place(&mut self, h: NodeHandle, node: ImpNode<V>) -> Option<ImpNode<V>> {
        if h.index() >= self.slots.len() {
            self.slots.resize_with(h.index() + 1, || None);
        }
        let old = self.slots[h.index()].replace(node);
        self.free = (0..self.slots.len() as u32)
            .rev()
            .map(NodeHandle)
            .filter(|h| self.slots[h.index()].is_none())
            .collect();
        old
    }

    pub fn try_get(&self, h: NodeHandle) -> Result<&ImpNode<V>, Error> {
        self.slots
            .get(h.index())
            .and_then(Option::as_ref)
            .ok_or(Error::DanglingHandle(h))
    }

    /// Resolves `h`; a dead or out-of-range handle is a fault.
    #[inline]
    pub fn get(&self, h: NodeHandle) -> &ImpNode<V> {
        match self.slots.get(h.index()) {
            Some(Some(node)) => node,
            _ => panic!("store access fault: handle {h} is not live"),
        }
    }

    #[inline]
    pub fn get_mut(&mut self, h: NodeHandle) -> &mut ImpNode<V> {
        match self.slots.get_mut(h.index()) {
            Some(Some(node)) => node,
            _ => panic!("store access fault: handle {h} is not live"),
        }
    }

    /// Mutable access to two distinct nodes at once.
    pub fn get_pair_mut(&mut self, a: NodeHandle, b: NodeHandle) -> (&mut ImpNode<V>, &mut ImpNode<V>) {
        assert_ne!(a, b, "aliased node pair");
        let (lo, hi, swapped) = if a < b { (a, b, false) } else { (b, a, true) };
        let (head, tail) = self.slots.split_at_mut(hi.index());
        let lo_node = head[lo.index()].as_mut().expect("store access fault");
        let hi_node = tail[0].as_mut().expect("store access fault");
        if swapped {
            (hi_node, lo_node)
        } else {
            (lo_node, hi_node)
        }
    }

    pub fn is_live(&self, h: NodeHandle) -> bool {
        matches!(self.slots.get(h.index()), Some(Some(_)))
    }

    pub fn live_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn live_handles(&self) -> impl Iterator<Item = NodeHandle> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(i, _)| NodeHandle(i as u32))
    }

    pub fn free_handles(&self) -> &[NodeHandle] {
        &self.free
    }

    /// Total slots ever handed out; an upper bound on any acyclic walk.
    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(vs: Vec<i64>) -> ImpNode<i64> {
        ImpNode::Leaf {
            values: PartialArray::from_vec(4, vs).unwrap(),
            next: None,
        }
    }

    #[test]
    fn free_list_recycles_lifo() {
        let mut s = NodeStore::new();
        let a = s.alloc(leaf(vec![1]));
        let b = s.alloc(leaf(vec![2]));
        s.free(a);
        s.free(b);
        assert_eq!(s.alloc(leaf(vec![3])), b);
        assert_eq!(s.alloc(leaf(vec![4])), a);
        assert_eq!(s.live_count(), 2);
    }

    #[test]
    fn dangling_handles_are_reported() {
        let mut s = NodeStore::new();
        let a = s.alloc(leaf(vec![1]));
        s.free(a);
        assert_eq!(s.try_get(a), Err(Error::DanglingHandle(a)));
        assert_eq!(
            s.try_get(NodeHandle::new(9)),
            Err(Error::DanglingHandle(NodeHandle::new(9)))
        );
    }

    #[test]
    #[should_panic(expected = "store access fault")]
    fn get_on_freed_handle_faults() {
        let mut s = NodeStore::new();
        let a = s.alloc(leaf(vec![1]));
        s.free(a);
        s.get(a);
    }

    #[test]
    fn place_fills_gaps_with_free_slots() {
        let mut s = NodeStore::new();
        s.place(NodeHandle::new(3), leaf(vec![1]));
        assert_eq!(s.live_count(), 1);
        assert_eq!(s.free_handles().len(), 3);
        assert_eq!(s.alloc(leaf(vec![2])), NodeHandle::new(0));
    }

    #[test]
    fn pair_access_keeps_argument_order() {
        let mut s = NodeStore::new();
        let a = s.alloc(leaf(vec![1]));
        let b = s.alloc(leaf(vec![2]));
        let (x, y) = s.get_pair_mut(b, a);
        assert_eq!(x.fill(), 1);
        if let (ImpNode::Leaf { values: vx, .. }, ImpNode::Leaf { values: vy, .. }) = (x, y) {
            assert_eq!(vx.as_slice(), &[2]);
            assert_eq!(vy.as_slice(), &[1]);
        }
    }
}
