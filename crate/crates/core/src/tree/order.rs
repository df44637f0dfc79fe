//! Computable linear orders: Kleene–Brouwer linearizations, ω-multiples,
//! descending-sequence trees and finite interval algebras.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::pairing::{pair, unpair};
use super::{Node, Tree, TreeSpec};
use crate::error::{Error, Result};

/// Carrier element of a [`LinearOrderSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Elem {
    Nat(u64),
    Node(Node),
    /// `(copy index, element)` in an ω-multiple.
    Copy(u64, Box<Elem>),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Nat(n) => write!(f, "{n}"),
            Elem::Node(n) => {
                f.write_str("<")?;
                for (i, x) in n.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(">")
            }
            Elem::Copy(i, e) => write!(f, "({i}, {e})"),
        }
    }
}

/// A decidable strict total order with a fixed listing of its carrier.
pub trait LinearOrder: Send + Sync {
    fn contains(&self, a: &Elem) -> bool;
    fn less(&self, a: &Elem, b: &Elem) -> bool;
    /// Carrier size when finite.
    fn size(&self) -> Option<usize>;
    /// The `i`-th element of the carrier listing.
    fn nth(&self, i: usize) -> Option<Elem>;
    fn index_of(&self, a: &Elem) -> Option<usize>;
}

#[derive(Clone)]
pub struct LinearOrderSpec(Arc<dyn LinearOrder>);

impl fmt::Debug for LinearOrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOrderSpec(size = {:?})", self.size())
    }
}

/// A failed order law, with the offending elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderViolation {
    Reflexive(Elem),
    NotTotal(Elem, Elem),
    Asymmetric(Elem, Elem),
    Intransitive(Elem, Elem, Elem),
}

impl LinearOrderSpec {
    pub fn new(order: impl LinearOrder + 'static) -> Self {
        LinearOrderSpec(Arc::new(order))
    }

    /// `0 < 1 < … < k-1` on naturals.
    pub fn finite_naturals(k: usize) -> Self {
        Self::explicit((0..k as u64).map(Elem::Nat).collect())
    }

    /// A finite order given in increasing order.
    pub fn explicit(increasing: Vec<Elem>) -> Self {
        Self::new(Explicit::new(increasing))
    }

    pub fn contains(&self, a: &Elem) -> bool {
        self.0.contains(a)
    }

    pub fn less(&self, a: &Elem, b: &Elem) -> bool {
        self.0.less(a, b)
    }

    pub fn size(&self) -> Option<usize> {
        self.0.size()
    }

    pub fn nth(&self, i: usize) -> Option<Elem> {
        self.0.nth(i)
    }

    pub fn index_of(&self, a: &Elem) -> Option<usize> {
        self.0.index_of(a)
    }

    pub fn cmp(&self, a: &Elem, b: &Elem) -> Ordering {
        if self.less(a, b) {
            Ordering::Less
        } else if self.less(b, a) {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    /// The first `n` listed carrier elements (fewer if the carrier is smaller).
    pub fn prefix(&self, n: usize) -> Vec<Elem> {
        (0..n).map_while(|i| self.nth(i)).collect()
    }

    /// The whole carrier of a finite order, or the first `n` elements of an
    /// infinite one, sorted increasingly.
    pub fn sorted(&self, n: usize) -> Vec<Elem> {
        let mut xs = self.prefix(self.size().unwrap_or(n));
        xs.sort_by(|a, b| self.cmp(a, b));
        xs
    }

    /// Checks irreflexivity, totality, asymmetry and transitivity by brute
    /// force on the given elements.
    pub fn check_strict_total(&self, xs: &[Elem]) -> std::result::Result<(), OrderViolation> {
        for a in xs {
            if self.less(a, a) {
                return Err(OrderViolation::Reflexive(a.clone()));
            }
        }
        for (i, a) in xs.iter().enumerate() {
            for b in &xs[i + 1..] {
                match (self.less(a, b), self.less(b, a)) {
                    (true, true) => return Err(OrderViolation::Asymmetric(a.clone(), b.clone())),
                    (false, false) if a != b => {
                        return Err(OrderViolation::NotTotal(a.clone(), b.clone()))
                    }
                    _ => {}
                }
            }
        }
        for a in xs {
            for b in xs {
                if !self.less(a, b) {
                    continue;
                }
                for c in xs {
                    if self.less(b, c) && !self.less(a, c) {
                        return Err(OrderViolation::Intransitive(a.clone(), b.clone(), c.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}

struct Explicit {
    listing: Vec<Elem>,
    rank: BTreeMap<Elem, usize>,
}

impl Explicit {
    fn new(increasing: Vec<Elem>) -> Self {
        let rank = increasing
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Explicit {
            listing: increasing,
            rank,
        }
    }
}

impl LinearOrder for Explicit {
    fn contains(&self, a: &Elem) -> bool {
        self.rank.contains_key(a)
    }

    fn less(&self, a: &Elem, b: &Elem) -> bool {
        match (self.rank.get(a), self.rank.get(b)) {
            (Some(x), Some(y)) => x < y,
            _ => false,
        }
    }

    fn size(&self) -> Option<usize> {
        Some(self.listing.len())
    }

    fn nth(&self, i: usize) -> Option<Elem> {
        self.listing.get(i).cloned()
    }

    fn index_of(&self, a: &Elem) -> Option<usize> {
        self.rank.get(a).copied()
    }
}

// ---------------------------------------------------------------------------
// Kleene–Brouwer

/// `a <_KB b`: `a` properly extends `b`, or `a` is smaller at the first
/// position where the two differ.
pub fn kb_less(a: &[u64], b: &[u64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    a.len() > b.len()
}

struct KleeneBrouwer {
    /// Truncation nodes in lexicographic order; this is the carrier listing.
    nodes: Vec<Node>,
}

impl LinearOrder for KleeneBrouwer {
    fn contains(&self, a: &Elem) -> bool {
        self.index_of(a).is_some()
    }

    fn less(&self, a: &Elem, b: &Elem) -> bool {
        match (a, b) {
            (Elem::Node(a), Elem::Node(b)) => kb_less(a, b),
            _ => false,
        }
    }

    fn size(&self) -> Option<usize> {
        Some(self.nodes.len())
    }

    fn nth(&self, i: usize) -> Option<Elem> {
        self.nodes.get(i).cloned().map(Elem::Node)
    }

    fn index_of(&self, a: &Elem) -> Option<usize> {
        match a {
            Elem::Node(n) => self.nodes.binary_search(n).ok(),
            _ => None,
        }
    }
}

/// The Kleene–Brouwer order on the `(depth, width)` truncation of `t`.
pub fn kleene_brouwer(t: &TreeSpec, depth: usize, width: u64) -> LinearOrderSpec {
    let nodes = t.truncate(depth, width).nodes().cloned().collect();
    LinearOrderSpec::new(KleeneBrouwer { nodes })
}

// ---------------------------------------------------------------------------
// ω-multiples

struct OmegaMultiple {
    base: LinearOrderSpec,
}

impl LinearOrder for OmegaMultiple {
    fn contains(&self, a: &Elem) -> bool {
        matches!(a, Elem::Copy(_, e) if self.base.contains(e))
    }

    fn less(&self, a: &Elem, b: &Elem) -> bool {
        match (a, b) {
            (Elem::Copy(i, x), Elem::Copy(j, y)) => i < j || (i == j && self.base.less(x, y)),
            _ => false,
        }
    }

    fn size(&self) -> Option<usize> {
        match self.base.size() {
            Some(0) => Some(0),
            _ => None,
        }
    }

    /// Copy-major for a finite base; Cantor dovetailing for an infinite one.
    fn nth(&self, i: usize) -> Option<Elem> {
        match self.base.size() {
            Some(0) => None,
            Some(k) => Some(Elem::Copy(
                (i / k) as u64,
                Box::new(self.base.nth(i % k)?),
            )),
            None => {
                let (copy, j) = unpair(i as u64);
                Some(Elem::Copy(copy, Box::new(self.base.nth(j as usize)?)))
            }
        }
    }

    fn index_of(&self, a: &Elem) -> Option<usize> {
        let Elem::Copy(copy, e) = a else { return None };
        let j = self.base.index_of(e)?;
        match self.base.size() {
            Some(k) => Some(*copy as usize * k + j),
            None => Some(pair(*copy, j as u64) as usize),
        }
    }
}

/// `L·ω = L + L + …`, on pairs `(copy, element)`.
pub fn omega_multiple(l: &LinearOrderSpec) -> LinearOrderSpec {
    LinearOrderSpec::new(OmegaMultiple { base: l.clone() })
}

// ---------------------------------------------------------------------------
// Descending sequences

struct DescendingSequences {
    order: LinearOrderSpec,
}

impl Tree for DescendingSequences {
    fn contains(&self, node: &[u64]) -> bool {
        let mut prev: Option<Elem> = None;
        for &i in node {
            let Some(e) = self.order.nth(i as usize) else {
                return false;
            };
            if let Some(p) = &prev {
                if !self.order.less(&e, p) {
                    return false;
                }
            }
            prev = Some(e);
        }
        true
    }

    fn child_bound(&self, _node: &[u64]) -> Option<u64> {
        self.order.size().map(|k| k as u64)
    }
}

/// The tree of finite strictly descending sequences of `l`. Entries are
/// positions in `l`'s carrier listing.
pub fn descending_sequence_tree(l: &LinearOrderSpec) -> TreeSpec {
    TreeSpec::new(DescendingSequences { order: l.clone() })
}

/// A longest strictly descending chain among `xs` (which need not be
/// sorted), listed largest first.
pub fn longest_descending_chain(order: &LinearOrderSpec, xs: &[Elem]) -> Vec<Elem> {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| order.cmp(a, b));
    sorted.dedup();
    let n = sorted.len();
    // len[i]: longest increasing run starting at sorted[i]; next[i] its successor
    let mut len = vec![1usize; n];
    let mut next = vec![None; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            if order.less(&sorted[i], &sorted[j]) && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
                next[i] = Some(j);
            }
        }
    }
    let Some(start) = (0..n).max_by_key(|&i| (len[i], std::cmp::Reverse(i))) else {
        return Vec::new();
    };
    let mut chain = vec![sorted[start].clone()];
    let mut cur = start;
    while let Some(j) = next[cur] {
        chain.push(sorted[j].clone());
        cur = j;
    }
    chain.reverse();
    chain
}

// ---------------------------------------------------------------------------
// Interval algebras

/// Finite interval algebra in atom normal form: atoms are the maximal
/// regions of the sample on which every generator `[a, b)` is constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalAlgebra {
    /// Sampled carrier, increasing.
    pub points: Vec<Elem>,
    /// Atoms, each increasing, ordered by their least point.
    pub atoms: Vec<Vec<Elem>>,
}

impl IntervalAlgebra {
    /// Number of elements of the algebra, `2^atoms`.
    pub fn element_count(&self) -> u128 {
        1u128 << self.atoms.len()
    }
}

/// The Boolean algebra generated by half-open intervals `[a, b)` (with `b`
/// possibly `+∞`) over the first `n` listed carrier elements of `l`.
pub fn interval_algebra(l: &LinearOrderSpec, n: usize) -> Result<IntervalAlgebra> {
    let mut points = l.prefix(n);
    if points.len() < n {
        return Err(Error::InsufficientCarrier {
            available: points.len(),
            requested: n,
        });
    }
    points.sort_by(|a, b| l.cmp(a, b));
    // generator [points[a], points[b]) for a < b <= n (b = n is +∞)
    let signature = |p: usize| -> Vec<bool> {
        let mut sig = Vec::new();
        for a in 0..n {
            for b in a + 1..=n {
                sig.push(a <= p && p < b);
            }
        }
        sig
    };
    let mut classes: BTreeMap<Vec<bool>, Vec<Elem>> = BTreeMap::new();
    let mut order_of_first: Vec<Vec<bool>> = Vec::new();
    for (p, e) in points.iter().enumerate() {
        let sig = signature(p);
        if !classes.contains_key(&sig) {
            order_of_first.push(sig.clone());
        }
        classes.entry(sig).or_default().push(e.clone());
    }
    let atoms = order_of_first
        .into_iter()
        .map(|sig| classes.remove(&sig).unwrap())
        .collect();
    Ok(IntervalAlgebra { points, atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{finite_tree_rank, FiniteTree};

    fn node(xs: &[u64]) -> Elem {
        Elem::Node(xs.to_vec())
    }

    #[test]
    fn kb_small_tree() {
        let t = FiniteTree::closure_of([vec![0, 0], vec![1]]).to_spec();
        let kb = kleene_brouwer(&t, 5, 5);
        let sorted = kb.sorted(0);
        assert_eq!(sorted, vec![node(&[0, 0]), node(&[0]), node(&[1]), node(&[])]);
        kb.check_strict_total(&sorted).unwrap();
    }

    #[test]
    fn kb_single_node_and_chain() {
        let kb = kleene_brouwer(&TreeSpec::root_only(), 3, 3);
        assert_eq!(kb.size(), Some(1));
        let chain = kleene_brouwer(&TreeSpec::zeros_path(), 6, 4);
        let sorted = chain.sorted(0);
        assert_eq!(sorted.len(), 7);
        assert_eq!(longest_descending_chain(&chain, &sorted).len(), 7);
        assert_eq!(sorted[0], node(&[0; 6]));
    }

    #[test]
    fn omega_multiple_examples() {
        let one = LinearOrderSpec::finite_naturals(1);
        let w = omega_multiple(&one);
        assert_eq!(w.size(), None);
        let xs = w.prefix(10);
        for pair in xs.windows(2) {
            assert!(w.less(&pair[0], &pair[1]));
        }
        let three = omega_multiple(&LinearOrderSpec::finite_naturals(3));
        let top0 = Elem::Copy(0, Box::new(Elem::Nat(2)));
        let bottom1 = Elem::Copy(1, Box::new(Elem::Nat(0)));
        assert!(three.less(&top0, &bottom1));
        let k = 4;
        let c = 5;
        let l = omega_multiple(&LinearOrderSpec::finite_naturals(k));
        let sample = l.prefix(k * c);
        assert_eq!(sample.len(), k * c);
        l.check_strict_total(&sample).unwrap();
        // the listing is already increasing, so the order type is k*c
        for w in sample.windows(2) {
            assert!(l.less(&w[0], &w[1]));
        }
        assert_eq!(l.index_of(&sample[13]), Some(13));
        assert_eq!(omega_multiple(&LinearOrderSpec::explicit(vec![])).size(), Some(0));
    }

    #[test]
    fn descending_sequences() {
        let one = descending_sequence_tree(&LinearOrderSpec::finite_naturals(1));
        assert_eq!(one.truncate(5, 5), FiniteTree::closure_of([vec![0]]));
        let three = descending_sequence_tree(&LinearOrderSpec::finite_naturals(3));
        let ft = three.truncate(10, 10);
        assert_eq!(ft.height(), Some(3));
        assert!(ft.contains(&[2, 1, 0]));
        for k in 0..6 {
            let ft = descending_sequence_tree(&LinearOrderSpec::finite_naturals(k)).truncate(10, 10);
            assert_eq!(finite_tree_rank(&ft).unwrap(), k);
        }
    }

    #[test]
    fn interval_algebra_examples() {
        let one = interval_algebra(&LinearOrderSpec::finite_naturals(1), 1).unwrap();
        assert_eq!(one.element_count(), 2);
        let three = interval_algebra(&LinearOrderSpec::finite_naturals(3), 3).unwrap();
        assert_eq!(three.atoms.len(), 3);
        let flat: Vec<Elem> = three.atoms.iter().flatten().cloned().collect();
        assert_eq!(flat, three.points);
        assert!(matches!(
            interval_algebra(&LinearOrderSpec::finite_naturals(2), 3),
            Err(Error::InsufficientCarrier { .. })
        ));
    }
}
