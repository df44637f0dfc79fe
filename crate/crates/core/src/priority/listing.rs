use std::collections::HashMap;

use crate::tree::Node;

/// One-to-one listing `l(1), l(2), …` of all pairs `(χ, k)`.
///
/// Pairs are listed by rank `|χ| + k + Σχ`; within a rank, smaller `k`
/// comes first and then `χ` in lexicographic order. A prefix `ξ ⪯ χ` and
/// `m <= n` give `rank(ξ, m) <= rank(χ, n)` with equality only for the
/// same pair, so `(ξ, m)` is always listed no later than `(χ, n)`.
#[derive(Debug, Clone, Default)]
pub struct Listing {
    pairs: Vec<(Node, u64)>,
    index: HashMap<(Node, u64), usize>,
    /// Every pair of rank `< ranks_done` has been listed.
    ranks_done: u64,
}

/// Nodes with `|χ| + Σχ = t`, in lexicographic order.
fn nodes_of_weight(t: u64) -> Vec<Node> {
    fn go(rest: u64, prefix: &mut Node, out: &mut Vec<Node>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        // an entry v costs v + 1
        for v in 0..rest {
            prefix.push(v);
            go(rest - v - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn rank(chi: &[u64], k: u64) -> u64 {
    chi.len() as u64 + k + chi.iter().sum::<u64>()
}

impl Listing {
    pub fn new() -> Self {
        Self::default()
    }

    fn extend_rank(&mut self) {
        let r = self.ranks_done;
        for k in 0..=r {
            for chi in nodes_of_weight(r - k) {
                self.index.insert((chi.clone(), k), self.pairs.len() + 1);
                self.pairs.push((chi, k));
            }
        }
        self.ranks_done += 1;
    }

    /// `l(i)` for `i >= 1`.
    pub fn get(&mut self, i: usize) -> (Node, u64) {
        assert!(i >= 1, "the listing starts at 1");
        while self.pairs.len() < i {
            self.extend_rank();
        }
        self.pairs[i - 1].clone()
    }

    /// The `i` with `l(i) = (chi, k)`.
    pub fn index_of(&mut self, chi: &[u64], k: u64) -> usize {
        let r = rank(chi, k);
        while self.ranks_done <= r {
            self.extend_rank();
        }
        self.index[&(chi.to_vec(), k)]
    }

    /// `l(1), …, l(n)`.
    pub fn prefix(&mut self, n: usize) -> Vec<(Node, u64)> {
        if n > 0 {
            self.get(n);
        }
        self.pairs[..n].to_vec()
    }
}

/// A fresh listing.
pub fn make_listing() -> Listing {
    Listing::new()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_entries() {
        let mut l = make_listing();
        assert_eq!(l.get(1), (vec![], 0));
        assert_eq!(l.get(2), (vec![0], 0));
        assert_eq!(l.get(3), (vec![], 1));
        assert_eq!(l.get(4), (vec![0, 0], 0));
        assert_eq!(l.get(5), (vec![1], 0));
        assert_eq!(l.index_of(&[1], 0), 5);
        assert_eq!(l.index_of(&[], 2), 7);
    }

    #[test]
    fn weights_count_compositions() {
        assert_eq!(nodes_of_weight(0).len(), 1);
        for t in 1..10 {
            assert_eq!(nodes_of_weight(t).len(), 1 << (t - 1));
        }
    }
}
