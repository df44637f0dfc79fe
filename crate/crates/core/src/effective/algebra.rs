use std::collections::BTreeSet;

use serde::Serialize;

/// Exact set algebra of two finite snapshots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnapshotAlgebra {
    pub union: BTreeSet<u64>,
    pub intersection: BTreeSet<u64>,
    pub a_minus_b: BTreeSet<u64>,
    pub b_minus_a: BTreeSet<u64>,
    pub symmetric_difference: BTreeSet<u64>,
}

pub fn snapshot_algebra(a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> SnapshotAlgebra {
    SnapshotAlgebra {
        union: a.union(b).copied().collect(),
        intersection: a.intersection(b).copied().collect(),
        a_minus_b: a.difference(b).copied().collect(),
        b_minus_a: b.difference(a).copied().collect(),
        symmetric_difference: a.symmetric_difference(b).copied().collect(),
    }
}
