//! Trees on ω^{<ω}, their effective transformations, and linear orders
//! built from them.
//!
//! Nodes over a product alphabet (2×ω, 2×2×ω) are stored as ordinary nodes
//! whose entries are Cantor codes, see [`pairing`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod iso;
mod order;
pub mod pairing;
mod transform;

pub use iso::{canonical_form, finite_tree_rank, tree_isomorphic};
pub use order::{
    descending_sequence_tree, interval_algebra, kb_less, kleene_brouwer,
    longest_descending_chain, omega_multiple, Elem, IntervalAlgebra, LinearOrder,
    LinearOrderSpec, OrderViolation,
};
pub use transform::{i_transform, pad_product, pair_coords, split_coords, unpair, IPipeline};

pub type Node = Vec<u64>;

/// A decidable, downward-closed set of finite sequences.
pub trait Tree: Send + Sync {
    fn contains(&self, node: &[u64]) -> bool;

    /// Strict upper bound on the last entry of any child of `node`, when one
    /// is known. `None` means unbounded; callers then supply a width.
    fn child_bound(&self, _node: &[u64]) -> Option<u64> {
        None
    }
}

/// Shared handle to a [`Tree`].
#[derive(Clone)]
pub struct TreeSpec(Arc<dyn Tree>);

impl fmt::Debug for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TreeSpec(..)")
    }
}

struct FnTree<F>(F);

impl<F: Fn(&[u64]) -> bool + Send + Sync> Tree for FnTree<F> {
    fn contains(&self, node: &[u64]) -> bool {
        (self.0)(node)
    }
}

struct Subtree {
    base: TreeSpec,
    prefix: Node,
}

impl Tree for Subtree {
    fn contains(&self, node: &[u64]) -> bool {
        let mut full = self.prefix.clone();
        full.extend_from_slice(node);
        self.base.contains(&full)
    }

    fn child_bound(&self, node: &[u64]) -> Option<u64> {
        let mut full = self.prefix.clone();
        full.extend_from_slice(node);
        self.base.child_bound(&full)
    }
}

impl TreeSpec {
    pub fn new(tree: impl Tree + 'static) -> Self {
        TreeSpec(Arc::new(tree))
    }

    /// Wraps a membership predicate. The caller guarantees downward closure.
    pub fn from_fn(f: impl Fn(&[u64]) -> bool + Send + Sync + 'static) -> Self {
        Self::new(FnTree(f))
    }

    pub fn empty() -> Self {
        Self::from_fn(|_| false)
    }

    /// All of ω^{<ω}.
    pub fn full() -> Self {
        Self::from_fn(|_| true)
    }

    /// The tree {λ}.
    pub fn root_only() -> Self {
        Self::from_fn(|n| n.is_empty())
    }

    /// Sequences all of whose entries are zero: a single infinite path.
    pub fn zeros_path() -> Self {
        Self::from_fn(|n| n.iter().all(|&x| x == 0))
    }

    pub fn contains(&self, node: &[u64]) -> bool {
        self.0.contains(node)
    }

    pub fn child_bound(&self, node: &[u64]) -> Option<u64> {
        self.0.child_bound(node)
    }

    /// Members `node⌢i` with `i < width` (and below the child bound).
    pub fn children(&self, node: &[u64], width: u64) -> Vec<Node> {
        let limit = self.child_bound(node).map_or(width, |b| b.min(width));
        let mut out = Vec::new();
        let mut child = node.to_vec();
        child.push(0);
        for i in 0..limit {
            *child.last_mut().unwrap() = i;
            if self.contains(&child) {
                out.push(child.clone());
            }
        }
        out
    }

    /// `T[prefix]`: the nodes `σ` with `prefix⌢σ ∈ T`.
    pub fn subtree(&self, prefix: &[u64]) -> TreeSpec {
        Self::new(Subtree {
            base: self.clone(),
            prefix: prefix.to_vec(),
        })
    }

    /// Every member of length `<= depth` whose entries are all `< width`.
    pub fn truncate(&self, depth: usize, width: u64) -> FiniteTree {
        let mut nodes = BTreeSet::new();
        if !self.contains(&[]) {
            return FiniteTree { nodes };
        }
        let mut stack = vec![Vec::new()];
        while let Some(node) = stack.pop() {
            if node.len() < depth {
                stack.extend(self.children(&node, width));
            }
            nodes.insert(node);
        }
        FiniteTree { nodes }
    }
}

/// An explicit finite tree, closed downward and rooted at λ unless empty.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "FiniteTreeJson", into = "FiniteTreeJson")]
pub struct FiniteTree {
    nodes: BTreeSet<Node>,
}

/// On-disk form: `{"nodes": [[entries], ...]}` with λ written `[]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteTreeJson {
    pub nodes: Vec<Node>,
}

impl TryFrom<FiniteTreeJson> for FiniteTree {
    type Error = Error;

    fn try_from(j: FiniteTreeJson) -> Result<Self> {
        FiniteTree::from_nodes(j.nodes)
    }
}

impl From<FiniteTree> for FiniteTreeJson {
    fn from(t: FiniteTree) -> Self {
        FiniteTreeJson {
            nodes: t.nodes.into_iter().collect(),
        }
    }
}

impl FiniteTree {
    /// Builds a tree from an explicit node list, which must be downward closed.
    pub fn from_nodes(nodes: impl IntoIterator<Item = Node>) -> Result<Self> {
        let nodes: BTreeSet<Node> = nodes.into_iter().collect();
        for n in &nodes {
            if !n.is_empty() && !nodes.contains(&n[..n.len() - 1]) {
                return Err(Error::Config(format!(
                    "node {n:?} is present but its parent is not"
                )));
            }
        }
        Ok(FiniteTree { nodes })
    }

    /// Downward closure of the given nodes.
    pub fn closure_of(nodes: impl IntoIterator<Item = Node>) -> Self {
        let mut out = BTreeSet::new();
        for n in nodes {
            for k in 0..=n.len() {
                out.insert(n[..k].to_vec());
            }
        }
        FiniteTree { nodes: out }
    }

    /// The chain λ ⊂ ⟨0⟩ ⊂ ⟨0,0⟩ ⊂ … of the given depth.
    pub fn chain(depth: usize) -> Self {
        Self::closure_of([vec![0; depth]])
    }

    /// λ with `k` leaf children ⟨0⟩…⟨k-1⟩.
    pub fn star(k: u64) -> Self {
        Self::closure_of((0..k).map(|i| vec![i]).chain([vec![]]))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite tree serializes")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &[u64]) -> bool {
        self.nodes.contains(node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter()
    }

    /// Immediate extensions of `node` present in the tree, in increasing order.
    pub fn children<'a>(&'a self, node: &'a [u64]) -> impl Iterator<Item = &'a Node> + 'a {
        let mut lo = node.to_vec();
        lo.push(0);
        self.nodes
            .range(lo..)
            .take_while(move |n| n.starts_with(node))
            .filter(move |n| n.len() == node.len() + 1)
    }

    /// Length of the longest node, `None` when empty.
    pub fn height(&self) -> Option<usize> {
        self.nodes.iter().map(Vec::len).max()
    }

    pub fn truncate(&self, depth: usize, width: u64) -> FiniteTree {
        FiniteTree {
            nodes: self
                .nodes
                .iter()
                .filter(|n| n.len() <= depth && n.iter().all(|&x| x < width))
                .cloned()
                .collect(),
        }
    }

    pub fn to_spec(&self) -> TreeSpec {
        TreeSpec::new(self.clone())
    }
}

impl Tree for FiniteTree {
    fn contains(&self, node: &[u64]) -> bool {
        self.nodes.contains(node)
    }

    fn child_bound(&self, node: &[u64]) -> Option<u64> {
        Some(self.children(node).map(|c| c[c.len() - 1] + 1).max().unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_counts() {
        assert_eq!(TreeSpec::full().truncate(0, 5).len(), 1);
        assert!(TreeSpec::empty().truncate(0, 5).is_empty());
        assert_eq!(TreeSpec::full().truncate(2, 2).len(), 7);
        let t = TreeSpec::full().truncate(3, 3);
        assert_eq!(t.truncate(2, 2), TreeSpec::full().truncate(2, 2));
    }

    #[test]
    fn truncations_are_downward_closed() {
        let t = TreeSpec::from_fn(|n| n.iter().all(|&x| x % 2 == 0) && n.len() < 4);
        let ft = t.truncate(5, 6);
        assert!(FiniteTree::from_nodes(ft.nodes().cloned()).is_ok());
        assert_eq!(ft.len(), 1 + 3 + 9 + 27);
    }

    #[test]
    fn json_shape() {
        let t = FiniteTree::from_json(r#"{"nodes": [[], [0], [1], [0, 0]]}"#).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.to_json(), r#"{"nodes":[[],[0],[0,0],[1]]}"#);
        assert!(FiniteTree::from_json(r#"{"nodes": [[], [0, 1]]}"#).is_err());
    }

    #[test]
    fn children_and_subtrees() {
        let t = FiniteTree::closure_of([vec![0, 3], vec![0, 1], vec![2]]);
        let kids: Vec<_> = t.children(&[0]).cloned().collect();
        assert_eq!(kids, vec![vec![0, 1], vec![0, 3]]);
        let sub = t.to_spec().subtree(&[0]).truncate(3, 10);
        assert_eq!(sub, FiniteTree::closure_of([vec![1], vec![3]]));
        assert_eq!(t.to_spec().child_bound(&[0]), Some(4));
    }
}
