//! Random trees that satisfy every invariant, built bottom-up rather than
//! by insertion so that fills and separators range over all legal values.

use bptree::{AlgTree, Order};
use rand::Rng;

use crate::Key;

pub fn random_tree<R: Rng>(rng: &mut R, k: Order, height: usize) -> AlgTree<Key> {
    let mut last = rng.gen_range(-50..50);
    build(rng, k, height, true, &mut last)
}

/// Tallest tree worth generating for `k`; keeps sizes in the low thousands.
pub fn max_height(k: Order) -> usize {
    match k.k() {
        1 => 5,
        2 => 4,
        3..=4 => 3,
        5..=16 => 2,
        _ => 1,
    }
}

pub fn random_tree_any_height<R: Rng>(rng: &mut R, k: Order) -> AlgTree<Key> {
    let h = rng.gen_range(0..=max_height(k));
    random_tree(rng, k, h)
}

fn build<R: Rng>(rng: &mut R, k: Order, height: usize, root: bool, last: &mut Key) -> AlgTree<Key> {
    let kk = k.k();
    if height == 0 {
        let lo = if root { 0 } else { kk };
        let n = rng.gen_range(lo..=2 * kk);
        return AlgTree::Leaf(
            (0..n)
                .map(|_| {
                    *last += rng.gen_range(1..=3);
                    *last
                })
                .collect(),
        );
    }
    let lo = if root { 2 } else { kk + 1 };
    // Wide nodes at big k make trees huge; bias toward the lower end.
    let hi = if kk > 4 { (lo + 4).min(2 * kk + 1) } else { 2 * kk + 1 };
    let n = rng.gen_range(lo..=hi);
    let mut subs = Vec::with_capacity(n);
    let mut seps = Vec::with_capacity(n - 1);
    for i in 0..n {
        let before = *last;
        let sub = build(rng, k, height - 1, false, last);
        if i > 0 {
            let min = leftmost_value(&sub);
            seps.push(rng.gen_range(before + 1..=min));
        }
        subs.push(sub);
    }
    let last_sub = subs.pop().expect("at least two subtrees");
    AlgTree::node(subs.into_iter().zip(seps).collect(), last_sub)
}

fn leftmost_value(t: &AlgTree<Key>) -> Key {
    match t {
        AlgTree::Leaf(vs) => vs[0],
        AlgTree::Node(ts, last) => ts.first().map_or_else(|| leftmost_value(last), |(s, _)| leftmost_value(s)),
    }
}
