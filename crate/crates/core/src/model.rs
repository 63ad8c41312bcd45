//! Purely functional B+-tree.
//!
//! This is the reference the imperative tree is checked against: every
//! mutation here rebuilds the affected path and returns a new value. The
//! rebalancing rules are the same ones `heap_tree` applies in place, so the
//! two agree structurally, not just on their key sets.

use std::fmt;

use crate::navigation::{self, Probe, Strategy};
use crate::Error;

/// Split factor of a tree. Inner nodes hold between `k` and `2k` separators,
/// arrays have capacity `2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order(usize);

impl Order {
    pub fn new(k: usize) -> Result<Self, Error> {
        if k == 0 {
            Err(Error::ZeroOrder)
        } else {
            Ok(Order(k))
        }
    }

    #[inline]
    pub fn k(self) -> usize {
        self.0
    }

    /// Node capacity, `2k`.
    #[inline]
    pub fn capacity(self) -> usize {
        2 * self.0
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Algebraic B+-tree: a leaf with its values, or an inner node with
/// `(subtree, separator)` pairs and a last subtree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgTree<V> {
    Leaf(Vec<V>),
    Node(Vec<(AlgTree<V>, V)>, Box<AlgTree<V>>),
}

/// One flag per structural invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub balanced: bool,
    pub order: bool,
    pub aligned: bool,
    pub sorted: bool,
}

impl InvariantReport {
    pub fn all(&self) -> bool {
        self.balanced && self.order && self.aligned && self.sorted
    }
}

impl<V> AlgTree<V> {
    pub fn leaf(values: impl IntoIterator<Item = V>) -> Self {
        AlgTree::Leaf(values.into_iter().collect())
    }

    pub fn node(pairs: Vec<(AlgTree<V>, V)>, last: AlgTree<V>) -> Self {
        AlgTree::Node(pairs, Box::new(last))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, AlgTree::Leaf(_))
    }

    /// Number of inner levels above the leaves along the leftmost path.
    pub fn height(&self) -> usize {
        match self {
            AlgTree::Leaf(_) => 0,
            AlgTree::Node(_, last) => 1 + last.height(),
        }
    }

    /// Entries held by the root node: values for a leaf, pairs for a node.
    pub fn fill(&self) -> usize {
        match self {
            AlgTree::Leaf(vs) => vs.len(),
            AlgTree::Node(ts, _) => ts.len(),
        }
    }

    /// Subtrees of an inner node in order, `last` included.
    pub fn children(&self) -> impl Iterator<Item = &AlgTree<V>> {
        let (pairs, last) = match self {
            AlgTree::Leaf(_) => (&[][..], None),
            AlgTree::Node(ts, t) => (ts.as_slice(), Some(&**t)),
        };
        pairs.iter().map(|(sub, _)| sub).chain(last)
    }

    pub fn separators(&self) -> Vec<&V> {
        match self {
            AlgTree::Leaf(_) => Vec::new(),
            AlgTree::Node(ts, _) => ts.iter().map(|(_, sep)| sep).collect(),
        }
    }
}

impl<V: Clone> AlgTree<V> {
    /// In-order concatenation of all leaf values.
    pub fn leaves(&self) -> Vec<V> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<V>) {
        match self {
            AlgTree::Leaf(vs) => out.extend_from_slice(vs),
            AlgTree::Node(ts, t) => {
                for (sub, _) in ts {
                    sub.collect_leaves(out);
                }
                t.collect_leaves(out);
            }
        }
    }

    /// The leaf subtrees, left to right.
    pub fn leaf_nodes(&self) -> Vec<AlgTree<V>> {
        let mut out = Vec::new();
        self.collect_leaf_nodes(&mut out);
        out
    }

    fn collect_leaf_nodes(&self, out: &mut Vec<AlgTree<V>>) {
        match self {
            AlgTree::Leaf(_) => out.push(self.clone()),
            AlgTree::Node(ts, t) => {
                for (sub, _) in ts {
                    sub.collect_leaf_nodes(out);
                }
                t.collect_leaf_nodes(out);
            }
        }
    }

    /// The tree with every leaf emptied; inner structure and separators kept.
    pub fn trunk(&self) -> AlgTree<V> {
        match self {
            AlgTree::Leaf(_) => AlgTree::Leaf(Vec::new()),
            AlgTree::Node(ts, t) => AlgTree::Node(
                ts.iter().map(|(sub, sep)| (sub.trunk(), sep.clone())).collect(),
                Box::new(t.trunk()),
            ),
        }
    }
}

impl<V: Ord + Clone> AlgTree<V> {
    /// Checks balancedness, order, alignment and sortedness. A missing `lo`
    /// or `hi` is an infinite bound; `lo = None` is the left-open shape used
    /// on the leftmost spine.
    pub fn check_invariants(
        &self,
        k: Order,
        lo: Option<&V>,
        hi: Option<&V>,
    ) -> InvariantReport {
        let leaves = self.leaves();
        InvariantReport {
            balanced: self.balanced_height().is_some(),
            order: self.order_ok(k, true),
            aligned: self.aligned(lo, hi),
            sorted: leaves.windows(2).all(|w| w[0] < w[1]),
        }
    }

    /// Height if every root-to-leaf path has the same length.
    fn balanced_height(&self) -> Option<usize> {
        match self {
            AlgTree::Leaf(_) => Some(0),
            AlgTree::Node(ts, t) => {
                let h = t.balanced_height()?;
                for (sub, _) in ts {
                    if sub.balanced_height()? != h {
                        return None;
                    }
                }
                Some(h + 1)
            }
        }
    }

    fn order_ok(&self, k: Order, root: bool) -> bool {
        let cap = k.capacity();
        match self {
            AlgTree::Leaf(vs) => vs.len() <= cap && (root || vs.len() >= k.k()),
            AlgTree::Node(ts, t) => {
                let min = if root { 1 } else { k.k() };
                (min..=cap).contains(&ts.len())
                    && ts.iter().all(|(sub, _)| sub.order_ok(k, false))
                    && t.order_ok(k, false)
            }
        }
    }

    /// Every value `v` satisfies `lo <= v < hi`; every child's interval is
    /// non-empty.
    fn aligned(&self, lo: Option<&V>, hi: Option<&V>) -> bool {
        if let (Some(l), Some(h)) = (lo, hi) {
            if l >= h {
                return false;
            }
        }
        match self {
            AlgTree::Leaf(vs) => vs
                .iter()
                .all(|v| lo.is_none_or(|l| l <= v) && hi.is_none_or(|h| v < h)),
            AlgTree::Node(ts, t) => {
                let mut lower = lo;
                for (sub, sep) in ts {
                    if !sub.aligned(lower, Some(sep)) {
                        return false;
                    }
                    lower = Some(sep);
                }
                t.aligned(lower, hi)
            }
        }
    }

    /// Index of the child a search for `x` descends into.
    fn route(ts: &[(AlgTree<V>, V)], x: &V) -> usize {
        Self::probe(ts, x).child()
    }

    fn probe(ts: &[(AlgTree<V>, V)], x: &V) -> Probe {
        Strategy::Linear.search_by(ts, x, |(_, sep)| sep, &mut Ord::cmp)
    }

    fn child(&self, i: usize) -> &AlgTree<V> {
        match self {
            AlgTree::Node(ts, t) => ts.get(i).map_or(&**t, |(sub, _)| sub),
            AlgTree::Leaf(_) => panic!("leaf has no children"),
        }
    }

    pub fn isin(&self, x: &V) -> bool {
        match self {
            AlgTree::Leaf(ks) => navigation::isin_list(x, ks),
            AlgTree::Node(ts, _) => self.child(Self::route(ts, x)).isin(x),
        }
    }

    pub fn insert(&self, k: Order, x: V) -> AlgTree<V> {
        match self.ins(k, &x) {
            Up::One(t) => t,
            Up::Two(l, sep, r) => AlgTree::node(vec![(l, sep)], r),
        }
    }

    fn ins(&self, k: Order, x: &V) -> Up<V> {
        match self {
            AlgTree::Leaf(ks) => {
                let vs = navigation::insert_list(x, ks);
                if vs.len() <= k.capacity() {
                    Up::One(AlgTree::Leaf(vs))
                } else {
                    let (l, r) = split_leaf_values(k, vs);
                    let sep = r[0].clone();
                    Up::Two(AlgTree::Leaf(l), sep, AlgTree::Leaf(r))
                }
            }
            AlgTree::Node(ts, t) => {
                let i = Self::route(ts, x);
                let mut ts = ts.clone();
                let mut last = (**t).clone();
                let sub = if i < ts.len() { &ts[i].0 } else { &last };
                match sub.ins(k, x) {
                    Up::One(new) => {
                        *child_slot(&mut ts, &mut last, i) = new;
                        Up::One(AlgTree::Node(ts, Box::new(last)))
                    }
                    Up::Two(l, sep, r) => {
                        *child_slot(&mut ts, &mut last, i) = r;
                        ts.insert(i, (l, sep));
                        if ts.len() <= k.capacity() {
                            Up::One(AlgTree::Node(ts, Box::new(last)))
                        } else {
                            let right = ts.split_off(k.k() + 1);
                            let (mid_sub, mid_sep) = ts.pop().expect("overflowing node");
                            Up::Two(
                                AlgTree::Node(ts, Box::new(mid_sub)),
                                mid_sep,
                                AlgTree::Node(right, Box::new(last)),
                            )
                        }
                    }
                }
            }
        }
    }

    pub fn delete(&self, k: Order, x: &V) -> AlgTree<V> {
        match self.del(k, x) {
            AlgTree::Node(ts, t) if ts.is_empty() => *t,
            t => t,
        }
    }

    fn del(&self, k: Order, x: &V) -> AlgTree<V> {
        match self {
            AlgTree::Leaf(ks) => AlgTree::Leaf(navigation::delete_list(x, ks)),
            AlgTree::Node(ts, t) => {
                let i = Self::route(ts, x);
                let mut ts = ts.clone();
                let mut last = (**t).clone();
                let slot = child_slot(&mut ts, &mut last, i);
                *slot = slot.del(k, x);
                if slot.fill() < k.k() {
                    rebalance(k, &mut ts, &mut last, i);
                }
                AlgTree::Node(ts, Box::new(last))
            }
        }
    }

    /// All values `>= x`, in order.
    pub fn lrange(&self, x: &V) -> Vec<V> {
        match self {
            AlgTree::Leaf(ks) => navigation::lrange_list(x, ks).to_vec(),
            AlgTree::Node(ts, _) => {
                let i = Self::route(ts, x);
                let mut out = self.child(i).lrange(x);
                for rest in self.children().skip(i + 1) {
                    rest.collect_leaves(&mut out);
                }
                out
            }
        }
    }

    /// The leaf nodes from the one `x` would live in through the last leaf.
    pub fn leaf_nodes_lrange(&self, x: &V) -> Vec<AlgTree<V>> {
        match self {
            AlgTree::Leaf(_) => vec![self.clone()],
            AlgTree::Node(ts, _) => {
                let i = Self::route(ts, x);
                let mut out = self.child(i).leaf_nodes_lrange(x);
                for rest in self.children().skip(i + 1) {
                    rest.collect_leaf_nodes(&mut out);
                }
                out
            }
        }
    }

    /// `lrange` obtained by trimming the first leaf of `leaf_nodes_lrange`
    /// and concatenating the rest.
    pub fn concat_leaf_nodes_lrange(&self, x: &V) -> Vec<V> {
        let nodes = self.leaf_nodes_lrange(x);
        let mut nodes = nodes.iter();
        let mut out = match nodes.next() {
            Some(AlgTree::Leaf(ks)) => navigation::lrange_list(x, ks).to_vec(),
            _ => unreachable!("leaf_nodes_lrange yields at least one leaf"),
        };
        for leaf in nodes {
            leaf.collect_leaves(&mut out);
        }
        out
    }
}

enum Up<V> {
    One(AlgTree<V>),
    Two(AlgTree<V>, V, AlgTree<V>),
}

fn child_slot<'a, V>(
    ts: &'a mut [(AlgTree<V>, V)],
    last: &'a mut AlgTree<V>,
    i: usize,
) -> &'a mut AlgTree<V> {
    if i < ts.len() {
        &mut ts[i].0
    } else {
        last
    }
}

/// Splits `2k+1` sorted values into `k` and `k+1`.
fn split_leaf_values<V>(k: Order, mut vs: Vec<V>) -> (Vec<V>, Vec<V>) {
    let r = vs.split_off(k.k());
    (vs, r)
}

/// Repairs an underflowing child `i`. It is paired with its left sibling
/// when it has one, otherwise with its right sibling; the pair either
/// shifts one entry across or merges into the left node.
fn rebalance<V: Clone>(k: Order, ts: &mut Vec<(AlgTree<V>, V)>, last: &mut AlgTree<V>, i: usize) {
    let j = i.saturating_sub(1);
    let underflow_is_right = i > j;
    let sep = ts[j].1.clone();
    let (left_part, right_part) = ts.split_at_mut(j + 1);
    let left = &mut left_part[j].0;
    let right = match right_part.first_mut() {
        Some((sub, _)) => sub,
        None => &mut *last,
    };
    let donor_fill = if underflow_is_right { left.fill() } else { right.fill() };
    if donor_fill > k.k() {
        let new_sep = match (left, right) {
            (AlgTree::Leaf(l), AlgTree::Leaf(r)) => {
                if underflow_is_right {
                    let v = l.pop().expect("donor leaf");
                    r.insert(0, v);
                } else {
                    let v = r.remove(0);
                    l.push(v);
                }
                r[0].clone()
            }
            (AlgTree::Node(lts, llast), AlgTree::Node(rts, _)) => {
                if underflow_is_right {
                    let (sub, lsep) = lts.pop().expect("donor node");
                    let moved = std::mem::replace(&mut **llast, sub);
                    rts.insert(0, (moved, sep));
                    lsep
                } else {
                    let (sub, rsep) = rts.remove(0);
                    let moved = std::mem::replace(&mut **llast, sub);
                    lts.push((moved, sep));
                    rsep
                }
            }
            _ => unreachable!("siblings at different heights"),
        };
        ts[j].1 = new_sep;
    } else {
        let taken = std::mem::replace(right, AlgTree::Leaf(Vec::new()));
        match (left, taken) {
            (AlgTree::Leaf(l), AlgTree::Leaf(r)) => l.extend(r),
            (AlgTree::Node(lts, llast), AlgTree::Node(rts, rlast)) => {
                let old_last = std::mem::replace(&mut **llast, *rlast);
                lts.push((old_last, sep));
                lts.extend(rts);
            }
            _ => unreachable!("siblings at different heights"),
        }
        let (merged, _) = ts.remove(j);
        *child_slot(ts, last, j) = merged;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> AlgTree<i64> {
        AlgTree::node(vec![(AlgTree::leaf([1, 2]), 3)], AlgTree::leaf([3, 4]))
    }

    fn k(n: usize) -> Order {
        Order::new(n).unwrap()
    }

    #[test]
    fn zero_order_rejected() {
        assert_eq!(Order::new(0), Err(Error::ZeroOrder));
    }

    #[test]
    fn leaves_and_leaf_nodes() {
        assert_eq!(AlgTree::leaf([1, 2]).leaves(), vec![1, 2]);
        assert_eq!(e1().leaves(), vec![1, 2, 3, 4]);
        assert!(AlgTree::<i64>::leaf([]).leaves().is_empty());
        assert_eq!(AlgTree::leaf([1]).leaf_nodes(), vec![AlgTree::leaf([1])]);
        assert_eq!(
            e1().leaf_nodes(),
            vec![AlgTree::leaf([1, 2]), AlgTree::leaf([3, 4])]
        );
    }

    #[test]
    fn trunk_erases_leaves() {
        assert_eq!(AlgTree::leaf([1, 2]).trunk(), AlgTree::leaf([]));
        let t = e1().trunk();
        assert_eq!(t, AlgTree::node(vec![(AlgTree::leaf([]), 3)], AlgTree::leaf([])));
        assert_eq!(t.trunk(), t);
    }

    #[test]
    fn invariant_examples() {
        assert!(e1().check_invariants(k(1), None, None).all());
        let bad = AlgTree::node(vec![(AlgTree::leaf([1, 2]), 3)], AlgTree::leaf([2, 4]));
        let r = bad.check_invariants(k(1), None, None);
        assert!(!r.aligned);
        assert!(r.balanced && r.order);
        let lonely = AlgTree::node(vec![], AlgTree::leaf([1]));
        assert!(!lonely.check_invariants(k(1), None, None).order);
        let unbalanced = AlgTree::node(vec![(AlgTree::leaf([1]), 2)], e1());
        assert!(!unbalanced.check_invariants(k(1), None, None).balanced);
        let over = AlgTree::leaf([1, 2, 3]);
        assert!(!over.check_invariants(k(1), None, None).order);
    }

    #[test]
    fn root_leaf_any_fill() {
        for kk in 1..5 {
            for n in 0..=2 * kk {
                let t = AlgTree::leaf(0..n as i64);
                assert!(t.check_invariants(k(kk), None, None).all());
            }
        }
    }

    #[test]
    fn aligned_with_bounds() {
        assert!(e1().check_invariants(k(1), Some(&1), Some(&5)).aligned);
        assert!(!e1().check_invariants(k(1), Some(&2), Some(&5)).aligned);
        assert!(!e1().check_invariants(k(1), None, Some(&4)).aligned);
    }

    #[test]
    fn isin_examples() {
        assert!(e1().isin(&3));
        assert!(!e1().isin(&0));
        assert!(!AlgTree::<i64>::leaf([]).isin(&7));
    }

    #[test]
    fn insert_examples() {
        assert_eq!(e1().insert(k(1), 5).leaves(), vec![1, 2, 3, 4, 5]);
        assert_eq!(e1().insert(k(1), 3), e1());
        assert_eq!(AlgTree::leaf([]).insert(k(1), 0), AlgTree::leaf([0]));
    }

    #[test]
    fn insert_splits_leaf_with_copied_separator() {
        let t = AlgTree::leaf([1, 2]).insert(k(1), 3);
        assert_eq!(t, AlgTree::node(vec![(AlgTree::leaf([1]), 2)], AlgTree::leaf([2, 3])));
    }

    #[test]
    fn delete_examples() {
        assert_eq!(e1().delete(k(1), &3).leaves(), vec![1, 2, 4]);
        assert_eq!(e1().delete(k(1), &9), e1());
        assert_eq!(AlgTree::leaf([1]).delete(k(1), &1), AlgTree::leaf([]));
    }

    #[test]
    fn delete_merges_and_collapses_root() {
        let t = AlgTree::node(vec![(AlgTree::leaf([1]), 2)], AlgTree::leaf([2]));
        assert_eq!(t.delete(k(1), &2), AlgTree::leaf([1]));
    }

    #[test]
    fn delete_borrows_from_left() {
        let t = AlgTree::node(vec![(AlgTree::leaf([1, 2]), 3)], AlgTree::leaf([3]));
        assert_eq!(
            t.delete(k(1), &3),
            AlgTree::node(vec![(AlgTree::leaf([1]), 2)], AlgTree::leaf([2]))
        );
    }

    #[test]
    fn range_examples() {
        assert_eq!(e1().lrange(&2), vec![2, 3, 4]);
        assert!(e1().lrange(&10).is_empty());
        assert_eq!(e1().leaf_nodes_lrange(&2), e1().leaf_nodes());
        assert_eq!(e1().leaf_nodes_lrange(&4), vec![AlgTree::leaf([3, 4])]);
        assert_eq!(
            AlgTree::leaf([5, 6]).leaf_nodes_lrange(&1),
            vec![AlgTree::leaf([5, 6])]
        );
        assert_eq!(e1().concat_leaf_nodes_lrange(&2), vec![2, 3, 4]);
        assert!(AlgTree::leaf([5, 6]).concat_leaf_nodes_lrange(&7).is_empty());
    }
}
