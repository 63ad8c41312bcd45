//! Executable refinement between a heap tree and its algebraic value.
//!
//! [`abstract_tree`] reads a [`TreeRoot`] back as an [`AlgTree`];
//! [`materialize`] goes the other way. [`fringe`] lists the leaf handles by
//! structural descent, which [`check_view_split`] compares with the leaf
//! chain: for a well-formed tree the chain reached through `next` links is
//! exactly the fringe, the leaf contents along it are the algebraic leaf
//! nodes, the inner nodes alone determine the trunk, and no node is reachable
//! twice.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Debug};

use crate::heap_tree::{ImpNode, NodeHandle, NodeStore, PartialArray, TreeRoot};
use crate::model::{AlgTree, Order};
use crate::navigation::Strategy;
use crate::Error;

/// Leaf handles of a tree in left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fringe(pub Vec<NodeHandle>);

impl Fringe {
    pub fn handles(&self) -> &[NodeHandle] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Names of the individual checks, as they appear in reports.
pub mod checks {
    pub const ABSTRACTION: &str = "abstraction";
    pub const CAPACITY: &str = "capacity";
    pub const FIRST: &str = "first";
    pub const CHAIN: &str = "chain";
    pub const CONTENT: &str = "content";
    pub const TRUNK: &str = "trunk";
    pub const SEPARATION: &str = "separation";
    pub const BALANCED: &str = "balanced";
    pub const ORDER: &str = "order";
    pub const ALIGNED: &str = "aligned";
    pub const SORTED: &str = "sorted";
    pub const EXPECTED: &str = "expected";

    /// Checks run by [`super::check_view_split`], in report order.
    pub const VIEW_SPLIT: [&str; 7] = [ABSTRACTION, CAPACITY, FIRST, CHAIN, CONTENT, TRUNK, SEPARATION];
    pub const INVARIANTS: [&str; 4] = [BALANCED, ORDER, ALIGNED, SORTED];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct RefinementReport<V> {
    pub ok: bool,
    pub abstract_tree: Option<AlgTree<V>>,
    pub fringe: Option<Fringe>,
    pub violations: Vec<Violation>,
}

impl<V> RefinementReport<V> {
    fn push(&mut self, check: &'static str, detail: impl Into<String>) {
        self.ok = false;
        self.violations.push(Violation {
            check,
            detail: detail.into(),
        });
    }

    pub fn failed(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    /// One `(name, ok, detail)` row per check in `names`.
    pub fn rows<'a>(&'a self, names: &'a [&'static str]) -> impl Iterator<Item = (&'static str, bool, String)> + 'a {
        names.iter().map(move |&name| {
            let details: Vec<&str> = self
                .violations
                .iter()
                .filter(|v| v.check == name)
                .map(|v| v.detail.as_str())
                .collect();
            (name, details.is_empty(), details.join("; "))
        })
    }
}

/// The algebraic tree `tree` stands for.
pub fn abstract_tree<V: Clone>(tree: &TreeRoot<V>) -> Result<AlgTree<V>, Error> {
    let mut path = HashSet::new();
    abstract_node(tree.store(), tree.root(), &mut path)
}

fn abstract_node<V: Clone>(
    store: &NodeStore<V>,
    h: NodeHandle,
    path: &mut HashSet<NodeHandle>,
) -> Result<AlgTree<V>, Error> {
    if !path.insert(h) {
        return Err(Error::CyclicStructure(h));
    }
    let t = match store.try_get(h)? {
        ImpNode::Leaf { values, .. } => AlgTree::Leaf(values.as_slice().to_vec()),
        ImpNode::Inner { entries, last } => {
            let mut pairs = Vec::with_capacity(entries.len());
            for (child, sep) in entries {
                pairs.push((abstract_node(store, *child, path)?, sep.clone()));
            }
            AlgTree::Node(pairs, Box::new(abstract_node(store, *last, path)?))
        }
    };
    path.remove(&h);
    Ok(t)
}

/// Leaf handles by structural descent, ignoring `next` links.
pub fn fringe<V>(tree: &TreeRoot<V>) -> Result<Fringe, Error> {
    let mut out = Vec::new();
    let mut path = HashSet::new();
    collect_fringe(tree.store(), tree.root(), &mut path, &mut out)?;
    Ok(Fringe(out))
}

fn collect_fringe<V>(
    store: &NodeStore<V>,
    h: NodeHandle,
    path: &mut HashSet<NodeHandle>,
    out: &mut Vec<NodeHandle>,
) -> Result<(), Error> {
    if !path.insert(h) {
        return Err(Error::CyclicStructure(h));
    }
    match store.try_get(h)? {
        ImpNode::Leaf { .. } => out.push(h),
        node @ ImpNode::Inner { .. } => {
            for child in node.children() {
                collect_fringe(store, child, path, out)?;
            }
        }
    }
    path.remove(&h);
    Ok(())
}

/// Builds a heap tree whose abstraction is `t`, with leaves chained in
/// fringe order.
pub fn materialize<V: Clone>(order: Order, t: &AlgTree<V>, strategy: Strategy) -> Result<TreeRoot<V>, Error> {
    let mut store = NodeStore::new();
    let mut leaves = Vec::new();
    let root = build(&mut store, order, t, &mut leaves)?;
    for pair in leaves.windows(2) {
        if let ImpNode::Leaf { next, .. } = store.get_mut(pair[0]) {
            *next = Some(pair[1]);
        }
    }
    Ok(TreeRoot::from_parts(order, strategy, store, root, leaves[0]))
}

fn build<V: Clone>(
    store: &mut NodeStore<V>,
    order: Order,
    t: &AlgTree<V>,
    leaves: &mut Vec<NodeHandle>,
) -> Result<NodeHandle, Error> {
    let cap = order.capacity();
    let over = |store: &NodeStore<V>, fill: usize| Error::CapacityExceeded {
        handle: NodeHandle::new(store.slot_count() as u32),
        fill,
        capacity: cap,
    };
    match t {
        AlgTree::Leaf(vs) => {
            let values = PartialArray::from_vec(cap, vs.clone()).map_err(|v| over(store, v.len()))?;
            let h = store.alloc(ImpNode::Leaf { values, next: None });
            leaves.push(h);
            Ok(h)
        }
        AlgTree::Node(ts, last) => {
            if ts.len() > cap {
                return Err(over(store, ts.len()));
            }
            let mut entries = PartialArray::new(cap);
            for (sub, sep) in ts {
                let child = build(store, order, sub, leaves)?;
                entries.push((child, sep.clone())).expect("checked fill");
            }
            let last = build(store, order, last, leaves)?;
            Ok(store.alloc(ImpNode::Inner { entries, last }))
        }
    }
}

/// Checks that the leaf chain and the trunk are two disjoint views of the
/// same tree. Failures are collected, never raised.
pub fn check_view_split<V: Clone + PartialEq + Debug>(tree: &TreeRoot<V>) -> RefinementReport<V> {
    let mut report = RefinementReport {
        ok: true,
        abstract_tree: None,
        fringe: None,
        violations: Vec::new(),
    };
    let (abs, fr) = match (abstract_tree(tree), fringe(tree)) {
        (Ok(a), Ok(f)) => (a, f),
        (Err(e), _) | (_, Err(e)) => {
            report.push(checks::ABSTRACTION, e.to_string());
            return report;
        }
    };
    let store = tree.store();

    let mut seen: HashMap<NodeHandle, usize> = HashMap::new();
    let mut inner = HashSet::new();
    let mut leaf_set = HashSet::new();
    walk(store, tree.root(), &mut |h, node| {
        *seen.entry(h).or_default() += 1;
        if node.is_leaf() {
            leaf_set.insert(h);
        } else {
            inner.insert(h);
        }
        if node.fill() > node.capacity() || node.capacity() != tree.order().capacity() {
            report.push(
                checks::CAPACITY,
                format!(
                    "node {h} fill {} capacity {} (expected {})",
                    node.fill(),
                    node.capacity(),
                    tree.order().capacity()
                ),
            );
        }
    });

    let mut aliased: Vec<NodeHandle> = seen.iter().filter(|(_, &n)| n > 1).map(|(&h, _)| h).collect();
    aliased.sort();
    if !aliased.is_empty() {
        report.push(checks::SEPARATION, format!("nodes reachable more than once: {aliased:?}"));
    }
    if let Some(h) = leaf_set.intersection(&inner).next() {
        report.push(checks::SEPARATION, format!("node {h} is both leaf and inner"));
    }

    if fr.handles().first() != Some(&tree.first()) {
        report.push(
            checks::FIRST,
            format!("cached first leaf {} but leftmost leaf is {:?}", tree.first(), fr.handles().first()),
        );
    }

    let chain = match walk_chain(store, tree.first()) {
        Ok(chain) => {
            if chain != fr.0 {
                report.push(
                    checks::CHAIN,
                    format!("chain {} but fringe {}", fmt_handles(&chain), fmt_handles(&fr.0)),
                );
            }
            chain
        }
        Err((chain, why)) => {
            report.push(checks::CHAIN, why);
            chain
        }
    };

    let leaf_nodes = abs.leaf_nodes();
    if chain.len() != leaf_nodes.len() {
        report.push(
            checks::CONTENT,
            format!("chain holds {} leaves, tree has {}", chain.len(), leaf_nodes.len()),
        );
    }
    for (h, expected) in chain.iter().zip(&leaf_nodes) {
        let values = match store.get(*h) {
            ImpNode::Leaf { values, .. } => values.as_slice(),
            ImpNode::Inner { .. } => unreachable!("walk_chain only returns leaves"),
        };
        if let AlgTree::Leaf(expected) = expected {
            if values != expected.as_slice() {
                report.push(checks::CONTENT, format!("leaf {h} holds {values:?}, expected {expected:?}"));
                break;
            }
        }
    }

    let trunk = trunk_from_inner(store, tree.root());
    if trunk != abs.trunk() {
        report.push(checks::TRUNK, "inner nodes do not determine the trunk");
    }

    report.abstract_tree = Some(abs);
    report.fringe = Some(fr);
    report
}

/// [`check_view_split`] plus the four structural invariants of the
/// abstraction.
pub fn check_structure<V: Ord + Clone + Debug>(tree: &TreeRoot<V>) -> RefinementReport<V> {
    let mut report = check_view_split(tree);
    if let Some(abs) = &report.abstract_tree {
        let inv = abs.check_invariants(tree.order(), None, None);
        let flags = [
            (checks::BALANCED, inv.balanced),
            (checks::ORDER, inv.order),
            (checks::ALIGNED, inv.aligned),
            (checks::SORTED, inv.sorted),
        ];
        for (name, holds) in flags {
            if !holds {
                report.push(name, format!("{name} invariant violated for k={}", tree.order()));
            }
        }
    }
    report
}

/// Full refinement check against an expected algebraic tree: structure-exact
/// equality, the view split and all invariants.
pub fn check_refinement<V: Ord + Clone + Debug>(tree: &TreeRoot<V>, expected: &AlgTree<V>) -> RefinementReport<V> {
    let mut report = check_structure(tree);
    if let Some(abs) = &report.abstract_tree {
        if let Some(diff) = first_difference(abs, expected, &mut Vec::new()) {
            report.push(checks::EXPECTED, diff);
        }
    }
    report
}

fn first_difference<V: PartialEq + Debug>(
    got: &AlgTree<V>,
    want: &AlgTree<V>,
    path: &mut Vec<usize>,
) -> Option<String> {
    match (got, want) {
        (AlgTree::Leaf(a), AlgTree::Leaf(b)) if a == b => None,
        (AlgTree::Node(ta, la), AlgTree::Node(tb, lb)) if ta.len() == tb.len() => {
            for (i, ((sa, pa), (sb, pb))) in ta.iter().zip(tb).enumerate() {
                if pa != pb {
                    return Some(format!("at {path:?}: separator {i} is {pa:?}, expected {pb:?}"));
                }
                path.push(i);
                let d = first_difference(sa, sb, path);
                path.pop();
                if d.is_some() {
                    return d;
                }
            }
            path.push(ta.len());
            let d = first_difference(la, lb, path);
            path.pop();
            d
        }
        _ => Some(format!("at {path:?}: got {}, expected {}", shape(got), shape(want))),
    }
}

fn shape<V: Debug>(t: &AlgTree<V>) -> String {
    match t {
        AlgTree::Leaf(vs) => format!("Leaf{vs:?}"),
        AlgTree::Node(ts, _) => {
            let seps: Vec<&V> = ts.iter().map(|(_, s)| s).collect();
            format!("Node{seps:?}")
        }
    }
}

/// Pre-order walk over reachable nodes, stopping at dangling handles and at
/// handles already on the current path.
fn walk<V>(store: &NodeStore<V>, root: NodeHandle, visit: &mut dyn FnMut(NodeHandle, &ImpNode<V>)) {
    fn go<V>(
        store: &NodeStore<V>,
        h: NodeHandle,
        path: &mut HashSet<NodeHandle>,
        visit: &mut dyn FnMut(NodeHandle, &ImpNode<V>),
    ) {
        let Ok(node) = store.try_get(h) else { return };
        if !path.insert(h) {
            return;
        }
        visit(h, node);
        for child in node.children() {
            go(store, child, path, visit);
        }
        path.remove(&h);
    }
    go(store, root, &mut HashSet::new(), visit)
}

/// Follows `next` links from `start`. On failure returns the prefix walked
/// so far and a description.
fn walk_chain<V>(store: &NodeStore<V>, start: NodeHandle) -> Result<Vec<NodeHandle>, (Vec<NodeHandle>, String)> {
    let mut chain = Vec::new();
    let mut seen = HashSet::new();
    let mut cur = Some(start);
    while let Some(h) = cur {
        if !seen.insert(h) {
            return Err((chain, format!("chain revisits leaf {h}")));
        }
        match store.try_get(h) {
            Ok(ImpNode::Leaf { next, .. }) => {
                chain.push(h);
                cur = *next;
            }
            Ok(ImpNode::Inner { .. }) => return Err((chain, format!("chain reaches inner node {h}"))),
            Err(e) => return Err((chain, format!("chain link broken: {e}"))),
        }
    }
    Ok(chain)
}

fn trunk_from_inner<V: Clone>(store: &NodeStore<V>, h: NodeHandle) -> AlgTree<V> {
    match store.try_get(h) {
        Ok(ImpNode::Inner { entries, last }) => AlgTree::Node(
            entries
                .iter()
                .map(|(child, sep)| (trunk_from_inner(store, *child), sep.clone()))
                .collect(),
            Box::new(trunk_from_inner(store, *last)),
        ),
        _ => AlgTree::Leaf(Vec::new()),
    }
}

fn fmt_handles(hs: &[NodeHandle]) -> String {
    let parts: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
    format!("[{}]", parts.join(" "))
}
