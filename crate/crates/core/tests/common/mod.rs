#![allow(dead_code)]

use bptree::{AlgTree, Order};
use rand::Rng;

/// Builds a random tree satisfying all invariants for `k` directly, without
/// going through insert. Values are strictly increasing with random gaps and
/// every separator is drawn from the gap between its neighbouring subtrees.
pub fn random_tree<R: Rng>(rng: &mut R, k: Order, height: usize) -> AlgTree<i64> {
    let mut last = rng.gen_range(-50..50);
    build(rng, k, height, true, &mut last)
}

pub fn max_height(k: Order) -> usize {
    match k.k() {
        1 => 4,
        2 => 3,
        3..=4 => 2,
        _ => 1,
    }
}

fn build<R: Rng>(rng: &mut R, k: Order, height: usize, root: bool, last: &mut i64) -> AlgTree<i64> {
    let kk = k.k();
    if height == 0 {
        let lo = if root { 0 } else { kk };
        let n = rng.gen_range(lo..=2 * kk);
        let vs = (0..n)
            .map(|_| {
                *last += rng.gen_range(1..=3);
                *last
            })
            .collect();
        return AlgTree::Leaf(vs);
    }
    let lo = if root { 2 } else { kk + 1 };
    let n = rng.gen_range(lo..=2 * kk + 1);
    let mut subtrees = Vec::with_capacity(n);
    let mut seps = Vec::with_capacity(n - 1);
    for i in 0..n {
        let before = *last;
        let sub = build(rng, k, height - 1, false, last);
        if i > 0 {
            let min = sub.leaves()[0];
            seps.push(rng.gen_range(before + 1..=min));
        }
        subtrees.push(sub);
    }
    let last_sub = subtrees.pop().unwrap();
    let pairs = subtrees.into_iter().zip(seps).collect();
    AlgTree::node(pairs, last_sub)
}

pub fn orders() -> Vec<Order> {
    [1, 2, 3, 4, 16].iter().map(|&k| Order::new(k).unwrap()).collect()
}
