mod common;

use bptree::dump;
use bptree::refinement::{abstract_tree, check_refinement, check_view_split, fringe, materialize};
use bptree::{AlgTree, Order, Strategy as Search, TreeRoot};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Clone, Debug)]
enum Op {
    Insert(i64),
    Delete(i64),
}

fn ops(universe: i64, len: usize) -> impl Strategy<Value = Vec<Op>> {
    proptest::collection::vec(
        prop_oneof![
            3 => (0..universe).prop_map(Op::Insert),
            2 => (0..universe).prop_map(Op::Delete),
        ],
        0..len,
    )
}

fn search() -> impl Strategy<Value = Search> {
    prop_oneof![Just(Search::Linear), Just(Search::Binary)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mirrored_mutations_refine_the_model(k in 1usize..5, s in search(), script in ops(80, 200)) {
        let k = Order::new(k).unwrap();
        let mut heap = TreeRoot::new(k, s);
        let mut model = AlgTree::leaf([]);
        for op in &script {
            let changed = match *op {
                Op::Insert(v) => {
                    let was = model.isin(&v);
                    model = model.insert(k, v);
                    let changed = heap.insert(v);
                    prop_assert_eq!(changed, !was);
                    changed
                }
                Op::Delete(v) => {
                    let was = model.isin(&v);
                    model = model.delete(k, &v);
                    let changed = heap.delete(&v);
                    prop_assert_eq!(changed, was);
                    changed
                }
            };
            let _ = changed;
            let report = check_refinement(&heap, &model);
            prop_assert!(report.ok, "{:?} after {:?}", report.violations, op);
            prop_assert_eq!(heap.first(), heap.first_leaf());
            prop_assert_eq!(
                heap.values().copied().collect::<Vec<_>>(),
                model.leaves()
            );
        }
    }

    #[test]
    fn strategies_produce_identical_dumps(k in 1usize..4, script in ops(60, 150)) {
        let k = Order::new(k).unwrap();
        let mut lin = TreeRoot::new(k, Search::Linear);
        let mut bin = TreeRoot::new(k, Search::Binary);
        for op in &script {
            match *op {
                Op::Insert(v) => { lin.insert(v); bin.insert(v); }
                Op::Delete(v) => { lin.delete(&v); bin.delete(&v); }
            }
        }
        prop_assert_eq!(dump::render(&lin), dump::render(&bin));
    }
}

#[test]
fn materialize_round_trips_random_trees() {
    let mut rng = StdRng::seed_from_u64(5);
    for i in 0..10_000 {
        let k = common::orders()[rng.gen_range(0..5)];
        let h = rng.gen_range(0..=common::max_height(k));
        let t = common::random_tree(&mut rng, k, h);
        let s = if i % 2 == 0 { Search::Linear } else { Search::Binary };
        let heap = materialize(k, &t, s).unwrap();
        assert_eq!(abstract_tree(&heap).unwrap(), t);
        let fr = fringe(&heap).unwrap();
        assert_eq!(fr.len(), t.leaf_nodes().len());
        assert_eq!(fr.handles()[0], heap.first_leaf());
        assert!(check_refinement(&heap, &t).ok);
        let loaded = dump::parse::<i64>(&dump::render(&heap)).unwrap().load(s).unwrap();
        assert_eq!(abstract_tree(&loaded).unwrap(), t);
    }
}

#[test]
fn heap_queries_match_model_and_leave_store_untouched() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..1_000 {
        let k = common::orders()[rng.gen_range(0..5)];
        let h = rng.gen_range(0..=common::max_height(k));
        let t = common::random_tree(&mut rng, k, h);
        let leaves = t.leaves();
        let s = Search::ALL[rng.gen_range(0..2)];
        let heap = materialize(k, &t, s).unwrap();
        let before = heap.fingerprint();
        let chain: Vec<AlgTree<i64>> = heap
            .leaf_iter()
            .map(|l| AlgTree::Leaf(l.values.as_slice().to_vec()))
            .collect();
        assert_eq!(chain, t.leaf_nodes());
        assert_eq!(heap.values().copied().collect::<Vec<_>>(), leaves);
        let (lo, hi) = (leaves.first().copied().unwrap_or(0), leaves.last().copied().unwrap_or(0));
        for _ in 0..10 {
            let x = rng.gen_range(lo - 3..=hi + 3);
            assert_eq!(heap.isin(&x), t.isin(&x));
            let start = heap.leaf_nodes_lrange(&x);
            let suffix: Vec<AlgTree<i64>> = bptree::heap_tree::LeafIter::from_leaf(&heap, Some(start))
                .map(|l| AlgTree::Leaf(l.values.as_slice().to_vec()))
                .collect();
            assert_eq!(suffix, t.leaf_nodes_lrange(&x));
            assert_eq!(heap.lrange(&x).copied().collect::<Vec<_>>(), t.lrange(&x));
        }
        assert_eq!(before, heap.fingerprint());
        assert!(check_view_split(&heap).ok);
    }
}

#[test]
fn long_random_run_keeps_chain_in_sync() {
    let mut rng = StdRng::seed_from_u64(1);
    let k = Order::new(3).unwrap();
    let mut heap = TreeRoot::new(k, Search::Binary);
    let mut model = AlgTree::leaf([]);
    for _ in 0..1_000 {
        let v = rng.gen_range(0..400);
        heap.insert(v);
        model = model.insert(k, v);
    }
    assert_eq!(abstract_tree(&heap).unwrap(), model);
    assert_eq!(heap.values().copied().collect::<Vec<_>>(), model.leaves());
    for _ in 0..1_000 {
        let v = rng.gen_range(0..400);
        heap.delete(&v);
        model = model.delete(k, &v);
        assert!(check_refinement(&heap, &model).ok);
    }
}
