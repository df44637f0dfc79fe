//! The `i + 3` parts a set at address `(χ, i)` is split into, and the
//! least-filled rotation that fills them.

use serde::Serialize;

use super::listing::Listing;
use crate::tree::{FiniteTree, Node};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Dest {
    /// Into `D_target`, built at the node of this depth on the current path.
    D { target: Node, depth: usize },
    H,
}

/// Destinations of the parts at address `(χ, i)` for tree `k`: part 0 goes
/// to `D_χ`, part `l + 1` to `D_{χ⌢l}` when `χ⌢l ∈ T` was listed with
/// index 0 before `(χ, i)`, everything else to `H`.
pub fn part_layout(
    chi: &[u64],
    i: u64,
    tree: &FiniteTree,
    k: usize,
    listing: &mut Listing,
) -> Vec<Dest> {
    let here = listing.index_of(chi, i);
    let mut out = Vec::with_capacity(i as usize + 3);
    out.push(if tree.contains(chi) {
        Dest::D {
            target: chi.to_vec(),
            depth: k + listing.index_of(chi, 0),
        }
    } else {
        Dest::H
    });
    for l in 0..=i {
        let mut child = chi.to_vec();
        child.push(l);
        let idx = listing.index_of(&child, 0);
        out.push(if tree.contains(&child) && idx < here {
            Dest::D {
                target: child,
                depth: k + idx,
            }
        } else {
            Dest::H
        });
    }
    out.push(Dest::H);
    out
}

/// Counts per part; each new element goes to the least-filled part in the
/// allowed range, lowest index first.
#[derive(Debug, Clone, Default)]
pub struct Rotation {
    counts: Vec<usize>,
}

impl Rotation {
    pub fn new(parts: usize) -> Self {
        Rotation {
            counts: vec![0; parts],
        }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn assign_in(&mut self, range: std::ops::Range<usize>) -> usize {
        let p = range
            .min_by_key(|&p| (self.counts[p], p))
            .expect("nonempty part range");
        self.counts[p] += 1;
        p
    }

    pub fn assign(&mut self) -> usize {
        self.assign_in(0..self.counts.len())
    }

    pub fn record(&mut self, p: usize) {
        self.counts[p] += 1;
    }
}
