//! Line-oriented text form of a heap tree.
//!
//! ```text
//! BPT k=1 root=2 first=0
//! N 2 [0 3] 1
//! L 0 [1 2] -> 1
//! L 1 [3 4] -> NIL
//! ```
//!
//! Nodes appear in pre-order from the root. Inner lines list
//! `child separator` pairs followed by the last child; leaf lines list the
//! values and the next leaf. The output depends only on the tree's shape and
//! handles, never on its search strategy.

use std::collections::HashSet;
use std::fmt::{Display, Write as _};
use std::str::FromStr;

use crate::heap_tree::{ImpNode, NodeHandle, NodeStore, PartialArray, TreeRoot};
use crate::model::Order;
use crate::navigation::Strategy;
use crate::Error;

pub fn render<V: Display>(tree: &TreeRoot<V>) -> String {
    let mut out = format!(
        "BPT k={} root={} first={}\n",
        tree.order(),
        tree.root(),
        tree.first()
    );
    let mut seen = HashSet::new();
    let mut stack = vec![tree.root()];
    while let Some(h) = stack.pop() {
        if !seen.insert(h) {
            continue;
        }
        let Ok(node) = tree.store().try_get(h) else { continue };
        match node {
            ImpNode::Inner { entries, last } => {
                let body: Vec<String> = entries.iter().map(|(c, s)| format!("{c} {s}")).collect();
                let _ = writeln!(out, "N {h} [{}] {last}", body.join(" "));
                let mut children = node.children();
                children.reverse();
                stack.extend(children);
            }
            ImpNode::Leaf { values, next } => {
                let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                let next = next.map_or_else(|| "NIL".to_string(), |n| n.to_string());
                let _ = writeln!(out, "L {h} [{}] -> {next}", body.join(" "));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DumpNode<V> {
    Inner {
        entries: Vec<(NodeHandle, V)>,
        last: NodeHandle,
    },
    Leaf {
        values: Vec<V>,
        next: Option<NodeHandle>,
    },
}

/// A parsed dump. Nodes are kept as raw lists, so an over-full node can be
/// reported instead of rejected by the parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dump<V> {
    pub order: Order,
    pub root: NodeHandle,
    pub first: NodeHandle,
    pub nodes: Vec<(NodeHandle, DumpNode<V>)>,
}

pub fn parse<V: FromStr>(text: &str) -> Result<Dump<V>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty dump"))?;
    let (order, root, first) = parse_header(hline, header)?;
    let mut nodes = Vec::new();
    let mut defined = HashSet::new();
    for (n, line) in lines {
        let (h, node) = parse_node(n, line)?;
        if !defined.insert(h) {
            return Err(perr(n, format!("node {h} defined twice")));
        }
        nodes.push((h, node));
    }
    Ok(Dump {
        order,
        root,
        first,
        nodes,
    })
}

fn parse_header(n: usize, line: &str) -> Result<(Order, NodeHandle, NodeHandle), ParseError> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some("BPT") {
        return Err(perr(n, "expected header `BPT k=<k> root=<handle> first=<handle>`"));
    }
    let mut field = |name: &str| -> Result<&str, ParseError> {
        toks.next()
            .and_then(|t| t.strip_prefix(name))
            .and_then(|t| t.strip_prefix('='))
            .ok_or_else(|| perr(n, format!("missing `{name}=` in header")))
    };
    let k: usize = field("k")?.parse().map_err(|_| perr(n, "bad order"))?;
    let order = Order::new(k).map_err(|e| perr(n, e.to_string()))?;
    let root = parse_handle(n, field("root")?)?;
    let first = parse_handle(n, field("first")?)?;
    if toks.next().is_some() {
        return Err(perr(n, "trailing tokens in header"));
    }
    Ok((order, root, first))
}

fn parse_handle(n: usize, tok: &str) -> Result<NodeHandle, ParseError> {
    let idx: u32 = tok.parse().map_err(|_| perr(n, format!("bad handle `{tok}`")))?;
    // Handles index a dense arena; reject anything that would allocate absurdly.
    if idx >= 1 << 24 {
        return Err(perr(n, format!("handle {idx} out of range")));
    }
    Ok(NodeHandle::new(idx))
}

fn parse_value<V: FromStr>(n: usize, tok: &str) -> Result<V, ParseError> {
    tok.parse().map_err(|_| perr(n, format!("bad value `{tok}`")))
}

fn parse_node<V: FromStr>(n: usize, line: &str) -> Result<(NodeHandle, DumpNode<V>), ParseError> {
    let spaced = line.replace('[', " [ ").replace(']', " ] ");
    let toks: Vec<&str> = spaced.split_whitespace().collect();
    let (kind, rest) = toks.split_first().ok_or_else(|| perr(n, "empty line"))?;
    let h = parse_handle(n, rest.first().ok_or_else(|| perr(n, "missing handle"))?)?;
    if rest.get(1) != Some(&"[") {
        return Err(perr(n, "expected `[`"));
    }
    let close = rest
        .iter()
        .position(|t| *t == "]")
        .ok_or_else(|| perr(n, "missing `]`"))?;
    let body = &rest[2..close];
    let tail = &rest[close + 1..];
    match *kind {
        "N" => {
            if body.len() % 2 != 0 {
                return Err(perr(n, "inner node body must be child/separator pairs"));
            }
            let entries = body
                .chunks(2)
                .map(|p| Ok((parse_handle(n, p[0])?, parse_value(n, p[1])?)))
                .collect::<Result<Vec<_>, ParseError>>()?;
            let [last] = tail else {
                return Err(perr(n, "expected exactly one last child after `]`"));
            };
            Ok((
                h,
                DumpNode::Inner {
                    entries,
                    last: parse_handle(n, last)?,
                },
            ))
        }
        "L" => {
            let values = body
                .iter()
                .map(|t| parse_value(n, t))
                .collect::<Result<Vec<V>, ParseError>>()?;
            let ["->", next] = tail else {
                return Err(perr(n, "expected `-> <handle|NIL>` after `]`"));
            };
            let next = match *next {
                "NIL" => None,
                t => Some(parse_handle(n, t)?),
            };
            Ok((h, DumpNode::Leaf { values, next }))
        }
        other => Err(perr(n, format!("unknown node kind `{other}`"))),
    }
}

impl<V> Dump<V> {
    /// Every node holding more than `2k` entries.
    pub fn capacity_violations(&self) -> Vec<Error> {
        let capacity = self.order.capacity();
        self.nodes
            .iter()
            .filter_map(|(h, node)| {
                let fill = match node {
                    DumpNode::Inner { entries, .. } => entries.len(),
                    DumpNode::Leaf { values, .. } => values.len(),
                };
                (fill > capacity).then_some(Error::CapacityExceeded {
                    handle: *h,
                    fill,
                    capacity,
                })
            })
            .collect()
    }

    /// Loads the nodes into a fresh store. Fails on the first node that does
    /// not fit a partial array of capacity `2k`. Dangling references are
    /// kept as they are; the refinement checks report them.
    pub fn load(self, strategy: Strategy) -> Result<TreeRoot<V>, Error> {
        if let Some(e) = self.capacity_violations().into_iter().next() {
            return Err(e);
        }
        let cap = self.order.capacity();
        let mut store = NodeStore::new();
        for (h, node) in self.nodes {
            let node = match node {
                DumpNode::Inner { entries, last } => ImpNode::Inner {
                    entries: PartialArray::from_vec(cap, entries).ok().expect("checked capacity"),
                    last,
                },
                DumpNode::Leaf { values, next } => ImpNode::Leaf {
                    values: PartialArray::from_vec(cap, values).ok().expect("checked capacity"),
                    next,
                },
            };
            store.place(h, node);
        }
        Ok(TreeRoot::from_parts(self.order, strategy, store, self.root, self.first))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AlgTree;
    use crate::refinement::{abstract_tree, materialize};

    const E1: &str = "BPT k=1 root=2 first=0\nN 2 [0 3] 1\nL 0 [1 2] -> 1\nL 1 [3 4] -> NIL\n";

    fn e1() -> AlgTree<i64> {
        AlgTree::node(vec![(AlgTree::leaf([1, 2]), 3)], AlgTree::leaf([3, 4]))
    }

    #[test]
    fn renders_e1() {
        let tree = materialize(Order::new(1).unwrap(), &e1(), Strategy::Binary).unwrap();
        assert_eq!(render(&tree), E1);
    }

    #[test]
    fn parses_and_loads_e1() {
        let dump: Dump<i64> = parse(E1).unwrap();
        let tree = dump.load(Strategy::Linear).unwrap();
        assert_eq!(abstract_tree(&tree).unwrap(), e1());
        assert_eq!(render(&tree), E1);
    }

    #[test]
    fn renders_empty_tree() {
        let tree = TreeRoot::<i64>::new(Order::new(3).unwrap(), Strategy::Binary);
        assert_eq!(render(&tree), "BPT k=3 root=0 first=0\nL 0 [] -> NIL\n");
        let back: Dump<i64> = parse(&render(&tree)).unwrap();
        assert_eq!(render(&back.load(Strategy::Binary).unwrap()), render(&tree));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(parse::<i64>("").unwrap_err().line, 1);
        assert_eq!(parse::<i64>("BPT k=0 root=0 first=0").unwrap_err().line, 1);
        let e = parse::<i64>("BPT k=1 root=0 first=0\nL 0 [1 x] -> NIL").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse::<i64>("BPT k=1 root=0 first=0\nL 0 [1] -> NIL\nL 0 [2] -> NIL").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(parse::<i64>("BPT k=1 root=0 first=0\nN 0 [1] 2").is_err());
        assert!(parse::<i64>("BPT k=1 root=0 first=0\nQ 0 [] 2").is_err());
        assert!(parse::<i64>("BPT k=1 root=0 first=0\nL 0 [1] 2").is_err());
    }

    #[test]
    fn overfull_node_is_a_load_error_not_a_parse_error() {
        let dump: Dump<i64> = parse("BPT k=1 root=0 first=0\nL 0 [1 2 3] -> NIL").unwrap();
        assert_eq!(dump.capacity_violations().len(), 1);
        assert!(matches!(
            dump.load(Strategy::Binary),
            Err(Error::CapacityExceeded { fill: 3, capacity: 2, .. })
        ));
    }
}
