//! Node-internal navigation.
//!
//! Everything that searches inside a single node goes through [`Strategy`],
//! so the tree can be built over linear scan or binary search without any
//! other code noticing. The abstract [`split`] operation partitions a list of
//! `(subtree, separator)` pairs around a probe; the leaf-level helpers
//! (`split_list`, `isin_list`, `lrange_list`, ...) do the same for plain
//! sorted value lists.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// How a node is searched for a probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[allow(clippy::manual_non_exhaustive)]
pub enum Strategy {
    Linear,
    Binary,
    /// Off-by-one binary search. Only for checking that the fuzzer notices.
    #[cfg(feature = "fault-injection")]
    #[doc(hidden)]
    FaultyOffByOne,
}

/// Outcome of searching a strictly sorted sequence for a probe.
///
/// `index` is the lower bound (first element `>= probe`, or the length).
/// `exact` is set when the element at `index` compares equal to the probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Probe {
    pub index: usize,
    pub exact: bool,
}

impl Probe {
    /// Child to descend into when keys equal to a separator live to its right.
    #[inline]
    pub fn child(self) -> usize {
        if self.exact {
            self.index + 1
        } else {
            self.index
        }
    }
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Linear, Strategy::Binary];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Linear => "linear",
            Strategy::Binary => "binary",
            #[cfg(feature = "fault-injection")]
            Strategy::FaultyOffByOne => "faulty",
        }
    }

    /// Searches `items` (strictly sorted by `key`) for `probe`, comparing
    /// with `cmp`. Every comparison goes through `cmp`, so a counting closure
    /// observes the exact cost of the search.
    pub fn search_by<T, V, K, C>(self, items: &[T], probe: &V, key: K, cmp: &mut C) -> Probe
    where
        K: Fn(&T) -> &V,
        C: FnMut(&V, &V) -> Ordering,
    {
        match self {
            Strategy::Linear => linear_search(items, probe, key, cmp),
            Strategy::Binary => binary_search(items, probe, key, cmp),
            #[cfg(feature = "fault-injection")]
            Strategy::FaultyOffByOne => {
                let found = binary_search(items, probe, key, cmp);
                if found.index > 0 && !found.exact {
                    Probe {
                        index: found.index - 1,
                        exact: false,
                    }
                } else {
                    found
                }
            }
        }
    }

    pub fn search<V: Ord>(self, items: &[V], probe: &V) -> Probe {
        self.search_by(items, probe, |v| v, &mut Ord::cmp)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown split strategy `{0}` (expected `linear` or `binary`)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Strategy::Linear),
            "binary" => Ok(Strategy::Binary),
            other => Err(UnknownStrategy(other.to_string())),
        }
    }
}

fn linear_search<T, V, K, C>(items: &[T], probe: &V, key: K, cmp: &mut C) -> Probe
where
    K: Fn(&T) -> &V,
    C: FnMut(&V, &V) -> Ordering,
{
    for (index, item) in items.iter().enumerate() {
        match cmp(key(item), probe) {
            Ordering::Less => continue,
            Ordering::Equal => return Probe { index, exact: true },
            Ordering::Greater => return Probe { index, exact: false },
        }
    }
    Probe {
        index: items.len(),
        exact: false,
    }
}

// Three-way lower bound. Separators are strictly sorted, so the first
// `Equal` seen is the answer and ends the search early.
fn binary_search<T, V, K, C>(items: &[T], probe: &V, key: K, cmp: &mut C) -> Probe
where
    K: Fn(&T) -> &V,
    C: FnMut(&V, &V) -> Ordering,
{
    let mut lo = 0;
    let mut hi = items.len();
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match cmp(key(&items[mid]), probe) {
            Ordering::Less => lo = mid + 1,
            Ordering::Equal => {
                return Probe {
                    index: mid,
                    exact: true,
                }
            }
            Ordering::Greater => hi = mid,
        }
    }
    Probe {
        index: lo,
        exact: false,
    }
}

/// Result of [`split`]: `left ++ right` is the input and `index == left.len()`.
#[derive(Debug, PartialEq, Eq)]
pub struct SplitResult<'a, E> {
    pub left: &'a [E],
    pub right: &'a [E],
}

impl<E> SplitResult<'_, E> {
    pub fn index(&self) -> usize {
        self.left.len()
    }
}

/// Partitions `(subtree, separator)` pairs so that every separator in `left`
/// is `< p` and the first separator of `right`, if any, is `>= p`.
pub fn split<'a, S, V: Ord>(pairs: &'a [(S, V)], p: &V) -> SplitResult<'a, (S, V)> {
    split_with(Strategy::Binary, pairs, p)
}

pub fn split_with<'a, S, V: Ord>(
    strategy: Strategy,
    pairs: &'a [(S, V)],
    p: &V,
) -> SplitResult<'a, (S, V)> {
    let at = strategy.search_by(pairs, p, |(_, sep)| sep, &mut Ord::cmp).index;
    let (left, right) = pairs.split_at(at);
    SplitResult { left, right }
}

/// Smallest `i` with `separators[i] >= p`, scanning from the left.
pub fn split_index_linear<V: Ord>(separators: &[V], p: &V) -> usize {
    Strategy::Linear.search(separators, p).index
}

/// Same contract as [`split_index_linear`], by bisection.
pub fn split_index_binary<V: Ord>(separators: &[V], p: &V) -> usize {
    Strategy::Binary.search(separators, p).index
}

/// Splits a sorted value list into the values `< p` and the rest.
pub fn split_list<'a, V: Ord>(values: &'a [V], p: &V) -> (&'a [V], &'a [V]) {
    values.split_at(split_index_binary(values, p))
}

pub fn isin_list<V: Ord>(x: &V, values: &[V]) -> bool {
    let (_, right) = split_list(values, x);
    right.first() == Some(x)
}

/// The suffix of `values` holding every element `>= x`.
pub fn lrange_list<'a, V: Ord>(x: &V, values: &'a [V]) -> &'a [V] {
    split_list(values, x).1
}

pub fn insert_list<V: Ord + Clone>(x: &V, values: &[V]) -> Vec<V> {
    let (left, right) = split_list(values, x);
    if right.first() == Some(x) {
        return values.to_vec();
    }
    let mut out = Vec::with_capacity(values.len() + 1);
    out.extend_from_slice(left);
    out.push(x.clone());
    out.extend_from_slice(right);
    out
}

pub fn delete_list<V: Ord + Clone>(x: &V, values: &[V]) -> Vec<V> {
    values.iter().filter(|v| *v != x).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        let pairs = [('A', 3), ('B', 5)];
        let r = split(&pairs, &4);
        assert_eq!(r.left, &[('A', 3)]);
        assert_eq!(r.right, &[('B', 5)]);
        let r = split(&pairs, &3);
        assert!(r.left.is_empty());
        assert_eq!(r.right, &pairs);
        let r = split(&pairs, &9);
        assert_eq!(r.left, &pairs);
        assert!(r.right.is_empty());
        let empty: [(char, i32); 0] = [];
        let r = split(&empty, &1);
        assert!(r.left.is_empty() && r.right.is_empty());
    }

    #[test]
    fn split_index_examples() {
        assert_eq!(split_index_linear(&[3, 5, 8, 11], &8), 2);
        assert_eq!(split_index_linear::<i64>(&[], &4), 0);
        assert_eq!(split_index_binary(&[3, 5, 8, 11], &4), 1);
        assert_eq!(split_index_binary(&[3], &3), 0);
        assert_eq!(split_index_binary(&[3, 5, 8, 11], &12), 4);
    }

    #[test]
    fn leaf_list_examples() {
        assert_eq!(split_list(&[1, 3, 5], &3), (&[1][..], &[3, 5][..]));
        assert_eq!(split_list(&[1, 3, 5], &0), (&[][..], &[1, 3, 5][..]));
        assert_eq!(split_list(&[1, 3, 5], &9), (&[1, 3, 5][..], &[][..]));
        assert!(isin_list(&3, &[1, 3, 5]));
        assert!(!isin_list(&2, &[1, 3, 5]));
        assert_eq!(lrange_list(&4, &[1, 3, 5, 7]), &[5, 7]);
        assert_eq!(lrange_list(&1, &[1, 3]), &[1, 3]);
        assert_eq!(insert_list(&2, &[1, 3]), vec![1, 2, 3]);
        assert_eq!(insert_list(&3, &[1, 3]), vec![1, 3]);
        assert_eq!(delete_list(&3, &[1, 3]), vec![1]);
        assert_eq!(delete_list(&4, &[1, 3]), vec![1, 3]);
    }

    #[test]
    fn probe_child_routes_equal_keys_right() {
        let seps = [3, 5];
        assert_eq!(Strategy::Binary.search(&seps, &3).child(), 1);
        assert_eq!(Strategy::Binary.search(&seps, &2).child(), 0);
        assert_eq!(Strategy::Linear.search(&seps, &4).child(), 1);
        assert_eq!(Strategy::Linear.search(&seps, &5).child(), 2);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("interpolation".parse::<Strategy>().is_err());
    }
}
