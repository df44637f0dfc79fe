#![allow(dead_code)]

use std::collections::BTreeMap;

use ce_core::effective::EnumeratorTable;
use ce_core::priority::{EnumeratorConfig, HemiInputs, Mode, RunConfig};
use ce_core::tree::{FiniteTree, Node};
use rand::Rng;

/// A random finite tree with exactly `size` nodes. Each new node is a child
/// of a uniformly chosen existing node, labelled with a random value.
pub fn random_tree(rng: &mut impl Rng, size: usize, width: u64) -> FiniteTree {
    let mut nodes: Vec<Node> = vec![vec![]];
    let mut seen: std::collections::BTreeSet<Node> = nodes.iter().cloned().collect();
    while nodes.len() < size {
        let parent = nodes[rng.gen_range(0..nodes.len())].clone();
        let mut child = parent;
        child.push(rng.gen_range(0..width));
        if seen.insert(child.clone()) {
            nodes.push(child);
        }
    }
    FiniteTree::from_nodes(nodes).unwrap()
}

/// Every plane tree with exactly `n` nodes, as child-index trees.
pub fn plane_trees(n: usize) -> Vec<FiniteTree> {
    // forests with `n` nodes, each a list of subtree shapes
    fn forests(n: usize, memo: &mut BTreeMap<usize, Vec<Vec<Shape>>>) -> Vec<Vec<Shape>> {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 0 {
            out.push(Vec::new());
        }
        for first in 1..=n {
            for kids in forests(first - 1, memo) {
                for rest in forests(n - first, memo) {
                    let mut f = vec![Shape(kids.clone())];
                    f.extend(rest);
                    out.push(f);
                }
            }
        }
        memo.insert(n, out.clone());
        out
    }
    fn place(s: &Shape, at: Node, out: &mut Vec<Node>) {
        for (i, k) in s.0.iter().enumerate() {
            let mut c = at.clone();
            c.push(i as u64);
            place(k, c, out);
        }
        out.push(at);
    }
    let mut memo = BTreeMap::new();
    forests(n - 1, &mut memo)
        .into_iter()
        .map(|kids| {
            let mut nodes = Vec::new();
            place(&Shape(kids), vec![], &mut nodes);
            FiniteTree::from_nodes(nodes).unwrap()
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Shape(Vec<Shape>);

/// Exhaustive search for a parent-preserving bijection between two trees.
pub fn brute_isomorphic(a: &FiniteTree, b: &FiniteTree) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let an: Vec<&Node> = a.nodes().collect();
    let bn: Vec<&Node> = b.nodes().collect();
    let parent = |ns: &[&Node], i: usize| -> Option<usize> {
        let n = ns[i];
        (!n.is_empty()).then(|| ns.iter().position(|m| **m == n[..n.len() - 1]).unwrap())
    };
    let ap: Vec<Option<usize>> = (0..an.len()).map(|i| parent(&an, i)).collect();
    let bp: Vec<Option<usize>> = (0..bn.len()).map(|i| parent(&bn, i)).collect();
    let children = |p: &[Option<usize>], i: usize| p.iter().filter(|&&q| q == Some(i)).count();
    // nodes are sorted, so every parent is mapped before its children
    fn go(
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ap: &[Option<usize>],
        bp: &[Option<usize>],
        ac: &[usize],
        bc: &[usize],
    ) -> bool {
        if i == ap.len() {
            return true;
        }
        for j in 0..bp.len() {
            if used[j] || ac[i] != bc[j] {
                continue;
            }
            let ok = match (ap[i], bp[j]) {
                (None, None) => true,
                (Some(p), Some(q)) => map[p] == q,
                _ => false,
            };
            if ok {
                used[j] = true;
                map.push(j);
                if go(i + 1, map, used, ap, bp, ac, bc) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
        }
        false
    }
    let ac: Vec<usize> = (0..an.len()).map(|i| children(&ap, i)).collect();
    let bc: Vec<usize> = (0..bn.len()).map(|i| children(&bp, i)).collect();
    go(0, &mut Vec::new(), &mut vec![false; bn.len()], &ap, &bp, &ac, &bc)
}

/// Table enumerator putting `j` in at stage `j + 1` whenever `keep(j)`.
pub fn stage_table(id: &str, stages: u64, keep: impl Fn(u64) -> bool) -> EnumeratorConfig {
    let stages = (0..stages)
        .filter(|&j| keep(j))
        .map(|j| ((j + 1).to_string(), vec![j]))
        .collect();
    EnumeratorConfig::Table(EnumeratorTable {
        id: id.into(),
        stages,
    })
}

/// The default two-tree run in hemimaximal mode with `M` the even positions,
/// split by residue mod 4.
pub fn hemi_config(stages: u64) -> RunConfig {
    let mut cfg = RunConfig::default_two_tree();
    cfg.stages = stages;
    cfg.mode = Mode::Hemimaximal(HemiInputs {
        m: stage_table("m", stages, |j| j % 2 == 0),
        h: stage_table("h", stages, |j| j % 4 == 0),
        h_breve: stage_table("h-breve", stages, |j| j % 4 == 2),
    });
    cfg
}
