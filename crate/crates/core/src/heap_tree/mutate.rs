//! In-place insertion and deletion.
//!
//! A full node is split through a scratch `Vec` holding the `2k+1` entries;
//! stored partial arrays never exceed `2k`. The left half of a split keeps
//! the original handle, and merges always fold the right node into the left,
//! so the leftmost leaf never changes identity.

use super::partial_array::PartialArray;
use super::store::{ImpNode, NodeHandle};
use super::TreeRoot;

enum Grown<V> {
    Done(bool),
    Split(V, NodeHandle),
}

impl<V: Ord + Clone> TreeRoot<V> {
    /// Adds `x`. Returns whether the tree changed.
    pub fn insert(&mut self, x: V) -> bool {
        self.epoch += 1;
        let changed = match self.insert_at(self.root, &x) {
            Grown::Done(changed) => changed,
            Grown::Split(sep, right) => {
                let mut entries = PartialArray::new(self.order.capacity());
                entries.push((self.root, sep)).expect("fresh root");
                self.root = self.store.alloc(ImpNode::Inner {
                    entries,
                    last: right,
                });
                true
            }
        };
        debug_assert_eq!(self.first, self.first_leaf());
        changed
    }

    fn insert_at(&mut self, h: NodeHandle, x: &V) -> Grown<V> {
        match self.store.get(h) {
            ImpNode::Leaf { values, .. } => {
                let probe = self.probe(values.as_slice(), x, |v| v);
                if probe.exact {
                    return Grown::Done(false);
                }
                if values.is_full() {
                    self.split_leaf(h, probe.index, x)
                } else {
                    if let ImpNode::Leaf { values, .. } = self.store.get_mut(h) {
                        values.insert(probe.index, x.clone()).expect("checked fill");
                    }
                    Grown::Done(true)
                }
            }
            node @ ImpNode::Inner { entries, .. } => {
                let i = self.route(entries, x);
                let child = node.child(i);
                match self.insert_at(child, x) {
                    Grown::Done(changed) => Grown::Done(changed),
                    Grown::Split(sep, right) => self.absorb(h, i, child, sep, right),
                }
            }
        }
    }

    fn split_leaf(&mut self, h: NodeHandle, pos: usize, x: &V) -> Grown<V> {
        let cap = self.order.capacity();
        let k = self.order.k();
        let (right_values, old_next) = match self.store.get_mut(h) {
            ImpNode::Leaf { values, next } => {
                let mut scratch = std::mem::replace(values, PartialArray::new(cap)).into_vec();
                scratch.insert(pos, x.clone());
                let right = scratch.split_off(k);
                *values = PartialArray::from_vec(cap, scratch).ok().expect("k <= 2k");
                (right, *next)
            }
            ImpNode::Inner { .. } => unreachable!(),
        };
        let sep = right_values[0].clone();
        let right = self.store.alloc(ImpNode::Leaf {
            values: PartialArray::from_vec(cap, right_values).ok().expect("k+1 <= 2k"),
            next: old_next,
        });
        if let ImpNode::Leaf { next, .. } = self.store.get_mut(h) {
            *next = Some(right);
        }
        Grown::Split(sep, right)
    }

    /// Child `i` of `h` (handle `child`) split into `child`, `sep`, `right`.
    fn absorb(&mut self, h: NodeHandle, i: usize, child: NodeHandle, sep: V, right: NodeHandle) -> Grown<V> {
        let cap = self.order.capacity();
        let k = self.order.k();
        let (entries, last) = match self.store.get_mut(h) {
            ImpNode::Inner { entries, last } => (entries, last),
            ImpNode::Leaf { .. } => unreachable!(),
        };
        if !entries.is_full() {
            match entries.get_mut(i) {
                Some(slot) => slot.0 = right,
                None => *last = right,
            }
            entries.insert(i, (child, sep)).expect("checked fill");
            return Grown::Done(true);
        }
        let mut scratch = std::mem::replace(entries, PartialArray::new(cap)).into_vec();
        let mut right_last = *last;
        match scratch.get_mut(i) {
            Some(slot) => slot.0 = right,
            None => right_last = right,
        }
        scratch.insert(i, (child, sep));
        let right_entries = scratch.split_off(k + 1);
        let (mid_child, mid_sep) = scratch.pop().expect("2k+1 entries");
        *entries = PartialArray::from_vec(cap, scratch).ok().expect("k <= 2k");
        *last = mid_child;
        let new_right = self.store.alloc(ImpNode::Inner {
            entries: PartialArray::from_vec(cap, right_entries).ok().expect("k <= 2k"),
            last: right_last,
        });
        Grown::Split(mid_sep, new_right)
    }

    /// Removes `x`. Returns whether the tree changed.
    pub fn delete(&mut self, x: &V) -> bool {
        self.epoch += 1;
        let changed = self.delete_at(self.root, x);
        if let ImpNode::Inner { entries, last } = self.store.get(self.root) {
            if entries.is_empty() {
                let new_root = *last;
                self.store.free(self.root);
                self.root = new_root;
            }
        }
        debug_assert_eq!(self.first, self.first_leaf());
        changed
    }

    fn delete_at(&mut self, h: NodeHandle, x: &V) -> bool {
        match self.store.get(h) {
            ImpNode::Leaf { values, .. } => {
                let probe = self.probe(values.as_slice(), x, |v| v);
                if !probe.exact {
                    return false;
                }
                if let ImpNode::Leaf { values, .. } = self.store.get_mut(h) {
                    values.remove(probe.index);
                }
                true
            }
            node @ ImpNode::Inner { entries, .. } => {
                let i = self.route(entries, x);
                let child = node.child(i);
                let changed = self.delete_at(child, x);
                if self.store.get(child).fill() < self.order.k() {
                    self.rebalance(h, i);
                }
                changed
            }
        }
    }

    /// Repairs underflowing child `i` of `parent` against its left sibling,
    /// or its right sibling when `i == 0`: borrow one entry if the sibling
    /// can spare it, otherwise merge the pair into the left node.
    fn rebalance(&mut self, parent: NodeHandle, i: usize) {
        let k = self.order.k();
        let j = i.saturating_sub(1);
        let underflow_is_right = i > j;
        let (lh, rh, sep) = match self.store.get(parent) {
            node @ ImpNode::Inner { entries, .. } => (node.child(j), node.child(j + 1), entries[j].1.clone()),
            ImpNode::Leaf { .. } => unreachable!(),
        };
        let donor = if underflow_is_right { lh } else { rh };
        if self.store.get(donor).fill() > k {
            let new_sep = match self.store.get_pair_mut(lh, rh) {
                (ImpNode::Leaf { values: l, .. }, ImpNode::Leaf { values: r, .. }) => {
                    if underflow_is_right {
                        let v = l.pop().expect("donor leaf");
                        r.insert(0, v).expect("underfull leaf");
                    } else {
                        let v = r.remove(0);
                        l.push(v).expect("underfull leaf");
                    }
                    r[0].clone()
                }
                (
                    ImpNode::Inner { entries: le, last: llast },
                    ImpNode::Inner { entries: re, .. },
                ) => {
                    if underflow_is_right {
                        let (sub, lsep) = le.pop().expect("donor node");
                        let moved = std::mem::replace(llast, sub);
                        re.insert(0, (moved, sep)).expect("underfull node");
                        lsep
                    } else {
                        let (sub, rsep) = re.remove(0);
                        let moved = std::mem::replace(llast, sub);
                        le.push((moved, sep)).expect("underfull node");
                        rsep
                    }
                }
                _ => unreachable!("siblings at different heights"),
            };
            if let ImpNode::Inner { entries, .. } = self.store.get_mut(parent) {
                entries.get_mut(j).expect("separator slot").1 = new_sep;
            }
            return;
        }

        let taken = self.store.free(rh);
        match (self.store.get_mut(lh), taken) {
            (
                ImpNode::Leaf { values: l, next },
                ImpNode::Leaf {
                    values: mut r,
                    next: rnext,
                },
            ) => {
                l.append(&mut r).expect("merged leaf fits");
                *next = rnext;
            }
            (
                ImpNode::Inner { entries: le, last: llast },
                ImpNode::Inner {
                    entries: mut re,
                    last: rlast,
                },
            ) => {
                let old_last = std::mem::replace(llast, rlast);
                le.push((old_last, sep)).expect("merged node fits");
                le.append(&mut re).expect("merged node fits");
            }
            _ => unreachable!("siblings at different heights"),
        }
        if let ImpNode::Inner { entries, last } = self.store.get_mut(parent) {
            match entries.get_mut(j + 1) {
                Some(slot) => slot.0 = lh,
                None => *last = lh,
            }
            entries.remove(j);
        }
    }
}
