//! Deliberate corruptions of a clean trace, one per audited property.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::priority::{left_of, path_str, Move, MoveKind, Side, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// An element of one `D` is also enumerated into another `D` of the same tree.
    DOverlap,
    /// Tree 1 loses every dump.
    HomogeneityDesync,
    /// One part of the busiest split store stops receiving elements.
    PartStarvation,
    /// A marker's e-state drops without a new generation.
    EstateRegression,
    /// A free ball moves right of the approximation.
    RightDrift,
}

impl Fault {
    pub const ALL: [Fault; 5] = [
        Fault::DOverlap,
        Fault::HomogeneityDesync,
        Fault::PartStarvation,
        Fault::EstateRegression,
        Fault::RightDrift,
    ];

    /// The audit expected to flag this fault.
    pub fn check(self) -> &'static str {
        match self {
            Fault::DOverlap => "partitions",
            Fault::HomogeneityDesync => "homogeneity",
            Fault::PartStarvation => "friedberg",
            Fault::EstateRegression => "markers",
            Fault::RightDrift => "discipline",
        }
    }
}

fn unfit(what: &str) -> Error {
    Error::Trace(format!("trace has no material for {what}"))
}

pub fn inject(fault: Fault, trace: &Trace) -> Result<Trace> {
    let mut t = trace.clone();
    match fault {
        Fault::DOverlap => {
            let (i, key, x) = t
                .stages
                .iter()
                .enumerate()
                .find_map(|(i, r)| {
                    r.enumerations
                        .iter()
                        .find(|(k, xs)| k.starts_with("D@") && !xs.is_empty())
                        .map(|(k, xs)| (i, k.clone(), xs[0]))
                })
                .ok_or_else(|| unfit("a D overlap"))?;
            let (tree, _) = key[2..].split_once(':').expect("D keys name a tree");
            let other = format!("D@{tree}:999");
            t.stages[i].enumerate(other, x);
        }
        Fault::HomogeneityDesync => {
            if t.header.config.trees.len() < 2 || !t.stages.iter().any(|r| !r.dumps.is_empty()) {
                return Err(unfit("a homogeneity desync"));
            }
            for r in &mut t.stages {
                r.dumps.retain(|d| d.k != 1);
            }
        }
        Fault::PartStarvation => {
            use std::collections::BTreeMap;
            let mut sizes: BTreeMap<(usize, String, bool), usize> = BTreeMap::new();
            for r in &t.stages {
                for p in &r.parts {
                    *sizes.entry((p.k, p.path.clone(), p.side == Side::Even)).or_default() += 1;
                }
            }
            let ((k, path, even), n) = sizes
                .into_iter()
                .max_by_key(|(key, n)| (*n, std::cmp::Reverse(key.clone())))
                .ok_or_else(|| unfit("part starvation"))?;
            if n < 16 {
                return Err(unfit("part starvation"));
            }
            // part 1 stops filling: its elements go to the last part instead
            let top = t
                .stages
                .iter()
                .flat_map(|r| r.parts.iter())
                .filter(|p| p.k == k && p.path == path && (p.side == Side::Even) == even)
                .map(|p| p.part)
                .max()
                .unwrap_or(0);
            for r in &mut t.stages {
                for p in &mut r.parts {
                    if p.k == k && p.path == path && (p.side == Side::Even) == even && p.part == 1 {
                        p.part = top;
                    }
                }
            }
        }
        Fault::EstateRegression => {
            let m = t
                .stages
                .iter()
                .flat_map(|r| r.markers.iter())
                .find(|m| !m.state.is_empty())
                .cloned()
                .ok_or_else(|| unfit("an e-state regression"))?;
            let last = t.stages.last_mut().expect("stages present");
            let mut high = m.clone();
            high.state = "1".repeat(m.state.len());
            let mut low = m;
            low.state = "0".repeat(high.state.len());
            last.markers.push(high);
            last.markers.push(low);
        }
        Fault::RightDrift => {
            let r = t
                .stages
                .iter_mut()
                .find(|r| !r.f.is_empty())
                .ok_or_else(|| unfit("a right drift"))?;
            let right = vec![r.f[0] + 1];
            debug_assert!(left_of(&r.f, &right));
            // the ball born this stage is free and sits at λ
            r.moves.insert(
                0,
                Move {
                    x: r.s,
                    from: path_str(&[]),
                    to: path_str(&right),
                    kind: MoveKind::Down,
                },
            );
        }
    }
    Ok(t)
}
