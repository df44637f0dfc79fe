use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::effective::PredicateSpec;
use crate::error::Result;
use crate::tree::TreeSpec;

/// The infinite tree of height 1: λ and every `⟨s⟩`.
pub fn t_pi2() -> TreeSpec {
    TreeSpec::from_fn(|n| n.len() <= 1)
}

/// Greatest `l <= cap` such that every `x <= l` has a `y < s` with
/// `holds(x, y)`, or `None` when already `x = 0` fails.
pub(crate) fn agreement_length(
    holds: impl Fn(u64, u64) -> bool,
    s: u64,
    cap: u64,
) -> Option<u64> {
    let mut l = None;
    for x in 0..=cap {
        if !(0..s).any(|y| holds(x, y)) {
            break;
        }
        l = Some(x);
    }
    l
}

/// `l(n, s)`: the greatest `l` with `∀x ≤ l ∃y < s R(n, x, y)`.
///
/// The search over `x` stops at `n + s`, so a predicate that holds for every
/// `x` gets a length that grows with the stage instead of diverging.
pub fn expansion_length(r: &PredicateSpec, n: u64, s: u64) -> Option<u64> {
    agreement_length(|x, y| r.eval_unchecked(&[n, x, y]), s, n.saturating_add(s))
}

/// Per-stage agreement lengths and expansionary stages for one `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub n: u64,
    /// `l[s]` for `s = 0..=stages`; `null` where no length is defined.
    pub l: Vec<Option<u64>>,
    pub expansionary: Vec<u64>,
}

/// `s` is expansionary when `l(s) > l(s-1)`, with `l(0)` undefined and an
/// undefined length below every defined one.
pub(crate) fn is_expansionary(prev: Option<u64>, cur: Option<u64>) -> bool {
    match (prev, cur) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(p), Some(c)) => c > p,
    }
}

pub fn reduction_trace(r: &PredicateSpec, n: u64, stages: u64) -> Result<ReductionTrace> {
    r.expect_arity(3)?;
    let l: Vec<Option<u64>> = (0..=stages).map(|s| expansion_length(r, n, s)).collect();
    let expansionary = (1..=stages)
        .filter(|&s| is_expansionary(l[s as usize - 1], l[s as usize]))
        .collect();
    Ok(ReductionTrace { n, l, expansionary })
}

/// Lazily extended table of agreement lengths.
pub(crate) struct LengthTable<F> {
    length_at: F,
    cache: Mutex<Vec<Option<u64>>>,
}

impl<F: Fn(u64) -> Option<u64>> LengthTable<F> {
    pub(crate) fn new(length_at: F) -> Self {
        LengthTable {
            length_at,
            cache: Mutex::new(Vec::new()),
        }
    }

    pub(crate) fn expansionary(&self, s: u64) -> bool {
        if s == 0 {
            return false;
        }
        let mut cache = self.cache.lock().unwrap();
        while cache.len() as u64 <= s {
            let t = cache.len() as u64;
            let v = (self.length_at)(t);
            cache.push(v);
        }
        is_expansionary(cache[s as usize - 1], cache[s as usize])
    }
}

/// `T_{2,A}(n)`: height 1, with `⟨s⟩` on the tree iff `s` is expansionary
/// for `n` under `r(n, x, y)`.
pub fn t2_a(r: &PredicateSpec, n: u64) -> Result<TreeSpec> {
    r.expect_arity(3)?;
    let r = r.clone();
    Ok(expansion_tree(move |s| expansion_length(&r, n, s)))
}

pub(crate) fn expansion_tree(
    length_at: impl Fn(u64) -> Option<u64> + Send + Sync + 'static,
) -> TreeSpec {
    let table = Arc::new(LengthTable::new(length_at));
    TreeSpec::from_fn(move |node| match node {
        [] => true,
        [s] => table.expansionary(*s),
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::parse_predicate;

    fn pred(text: &str) -> PredicateSpec {
        parse_predicate(text).unwrap()
    }

    #[test]
    fn pi2_tree() {
        let t = t_pi2();
        assert!(t.contains(&[1000]));
        assert!(!t.contains(&[0, 0]));
        assert_eq!(t.truncate(1, 17).len(), 18);
        assert_eq!(t.truncate(4, 17).len(), 18);
    }

    #[test]
    fn lengths() {
        let ge = pred("R(n,x,y) := y >= x");
        assert_eq!(expansion_length(&ge, 0, 5), Some(4));
        let lt = pred("R(n,x,y) := x < n");
        assert_eq!(expansion_length(&lt, 3, 10), Some(2));
        assert_eq!(expansion_length(&lt, 0, 10), None);
        assert_eq!(expansion_length(&ge, 7, 0), None);
    }

    #[test]
    fn always_expansionary() {
        let ge = pred("R(n,x,y) := y >= x");
        let trace = reduction_trace(&ge, 2, 50).unwrap();
        assert_eq!(trace.expansionary, (1..=50).collect::<Vec<_>>());
        for w in trace.l.windows(2) {
            assert!(w[0] <= w[1]);
        }
        let t = t2_a(&ge, 2).unwrap();
        assert_eq!(t.truncate(1, 50).len(), 50);
    }

    #[test]
    fn single_expansion() {
        let lt = pred("R(n,x,y) := x < n");
        let trace = reduction_trace(&lt, 3, 50).unwrap();
        assert_eq!(trace.expansionary, vec![1]);
        assert_eq!(trace.l[1], Some(2));
        let t = t2_a(&lt, 3).unwrap();
        assert_eq!(t.truncate(1, 200).len(), 2);
    }

    #[test]
    fn trace_json_shape() {
        let lt = pred("R(n,x,y) := x < n");
        let trace = reduction_trace(&lt, 1, 2).unwrap();
        assert_eq!(
            serde_json::to_string(&trace).unwrap(),
            r#"{"n":1,"l":[null,0,0],"expansionary":[1]}"#
        );
        assert!(reduction_trace(&pred("R(n,x) := x < n"), 1, 2).is_err());
    }
}
