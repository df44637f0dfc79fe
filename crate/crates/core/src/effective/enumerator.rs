use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::predicate::PredicateSpec;
use crate::error::{Error, Result};

/// Where the elements of an [`Enumerator`] come from.
#[derive(Debug, Clone)]
pub enum EnumSource {
    /// Explicit table: stage -> elements enumerated at that stage.
    Table(BTreeMap<u64, BTreeSet<u64>>),
    /// `n` enters at stage `s` iff `n < s` and `guard(n, s)` holds. With a
    /// `lag`, only `s - lag <= n` is examined at stage `s`.
    Guard {
        guard: PredicateSpec,
        lag: Option<u64>,
    },
}

/// Serialized table form: `{"id": "...", "stages": {"<s>": [..]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratorTable {
    pub id: String,
    pub stages: BTreeMap<String, Vec<u64>>,
}

#[derive(Debug, Default, Clone)]
struct Materialized {
    /// Stages `< next` have been computed.
    next: u64,
    entry: BTreeMap<u64, u64>,
    by_stage: BTreeMap<u64, Vec<u64>>,
}

impl Materialized {
    fn record(&mut self, x: u64, s: u64) {
        if let std::collections::btree_map::Entry::Vacant(v) = self.entry.entry(x) {
            v.insert(s);
            self.by_stage.entry(s).or_default().push(x);
        }
    }
}

/// A monotone, stage-indexed presentation of a c.e. set.
#[derive(Debug)]
pub struct Enumerator {
    id: String,
    source: EnumSource,
    cache: Mutex<Materialized>,
}

impl Clone for Enumerator {
    fn clone(&self) -> Self {
        Enumerator {
            id: self.id.clone(),
            source: self.source.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Enumerator {
    pub fn table(
        id: impl Into<String>,
        stages: impl IntoIterator<Item = (u64, Vec<u64>)>,
    ) -> Self {
        let mut table: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for (s, xs) in stages {
            table.entry(s).or_default().extend(xs);
        }
        let mut m = Materialized {
            next: u64::MAX,
            ..Default::default()
        };
        for (&s, xs) in &table {
            for &x in xs {
                m.record(x, s);
            }
        }
        Enumerator {
            id: id.into(),
            source: EnumSource::Table(table),
            cache: Mutex::new(m),
        }
    }

    pub fn empty(id: impl Into<String>) -> Self {
        Self::table(id, std::iter::empty())
    }

    /// Predicate-driven enumerator; the guard must take `(n, s)`.
    pub fn guard(id: impl Into<String>, guard: PredicateSpec, lag: Option<u64>) -> Result<Self> {
        let id = id.into();
        if guard.arity() != 2 {
            return Err(Error::Enumerator {
                id,
                reason: format!("guard must take (n, s), has {} parameters", guard.arity()),
            });
        }
        Ok(Enumerator {
            id,
            source: EnumSource::Guard { guard, lag },
            cache: Mutex::new(Materialized::default()),
        })
    }

    pub fn from_table(t: &EnumeratorTable) -> Result<Self> {
        let mut stages = Vec::with_capacity(t.stages.len());
        for (k, xs) in &t.stages {
            let s = k.parse::<u64>().map_err(|_| Error::Enumerator {
                id: t.id.clone(),
                reason: format!("stage key {k:?} is not a natural"),
            })?;
            stages.push((s, xs.clone()));
        }
        Ok(Self::table(t.id.clone(), stages))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: EnumeratorTable = serde_json::from_str(text)?;
        Self::from_table(&t)
    }

    /// Table form of everything enumerated by stage `s`.
    pub fn to_table(&self, s: u64) -> EnumeratorTable {
        self.materialize(s);
        let cache = self.cache.lock().unwrap();
        let stages = cache
            .by_stage
            .range(..=s)
            .map(|(st, xs)| {
                let mut xs = xs.clone();
                xs.sort_unstable();
                (st.to_string(), xs)
            })
            .collect();
        EnumeratorTable {
            id: self.id.clone(),
            stages,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn source(&self) -> &EnumSource {
        &self.source
    }

    /// Highest stage computed so far (`u64::MAX` for tables).
    pub fn bound(&self) -> u64 {
        match self.source {
            EnumSource::Table(_) => u64::MAX,
            EnumSource::Guard { .. } => self.cache.lock().unwrap().next.saturating_sub(1),
        }
    }

    fn materialize(&self, s: u64) {
        let EnumSource::Guard { guard, lag } = &self.source else {
            return;
        };
        let mut cache = self.cache.lock().unwrap();
        while cache.next <= s {
            let st = cache.next;
            let lo = lag.map_or(0, |l| st.saturating_sub(l));
            for n in lo..st {
                if !cache.entry.contains_key(&n) && guard.eval_unchecked(&[n, st]) {
                    cache.record(n, st);
                }
            }
            cache.next += 1;
        }
    }

    /// `W_{e,s}`: every element enumerated at a stage `<= s`.
    pub fn enumerate_upto(&self, s: u64) -> BTreeSet<u64> {
        self.materialize(s);
        let cache = self.cache.lock().unwrap();
        cache
            .by_stage
            .range(..=s)
            .flat_map(|(_, xs)| xs.iter().copied())
            .collect()
    }

    /// Elements first enumerated at exactly stage `s`.
    pub fn entered_at(&self, s: u64) -> Vec<u64> {
        self.materialize(s);
        let cache = self.cache.lock().unwrap();
        let mut xs = cache.by_stage.get(&s).cloned().unwrap_or_default();
        xs.sort_unstable();
        xs
    }

    pub fn contains_at(&self, x: u64, s: u64) -> bool {
        self.entry_stage(x, s).is_some()
    }

    /// The stage at which `x` entered, if that happened by stage `s`.
    pub fn entry_stage(&self, x: u64, s: u64) -> Option<u64> {
        self.materialize(s);
        let cache = self.cache.lock().unwrap();
        cache.entry.get(&x).copied().filter(|&t| t <= s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::parse_predicate;

    #[test]
    fn table_examples() {
        let empty = Enumerator::empty("w");
        assert!(empty.enumerate_upto(100).is_empty());

        let t = Enumerator::table("w", [(1, vec![2]), (3, vec![5])]);
        assert_eq!(t.enumerate_upto(2), BTreeSet::from([2]));
        assert_eq!(t.enumerate_upto(10), BTreeSet::from([2, 5]));
        assert_eq!(t.entered_at(3), vec![5]);
        assert!(!t.contains_at(5, 2));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"id":"evens","stages":{"1":[0],"3":[2],"5":[4]}}"#;
        let e = Enumerator::from_json(text).unwrap();
        assert_eq!(e.enumerate_upto(4), BTreeSet::from([0, 2]));
        let back = e.to_table(10);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn bad_stage_key_rejected() {
        let text = r#"{"id":"bad","stages":{"x":[0]}}"#;
        assert!(matches!(
            Enumerator::from_json(text),
            Err(Error::Enumerator { .. })
        ));
    }

    #[test]
    fn guard_enumerators() {
        let g = parse_predicate("G(n, s) := n mod 2 = 0 and s = n + 1").unwrap();
        let e = Enumerator::guard("evens", g.clone(), None).unwrap();
        assert_eq!(e.enumerate_upto(7), BTreeSet::from([0, 2, 4, 6]));
        assert_eq!(e.entry_stage(4, 100), Some(5));
        let lagged = Enumerator::guard("evens", g, Some(1)).unwrap();
        assert_eq!(lagged.enumerate_upto(200), e.enumerate_upto(200));

        let bad = parse_predicate("G(n) := n = 1").unwrap();
        assert!(Enumerator::guard("bad", bad, None).is_err());
    }

    #[test]
    fn guard_is_monotone_and_deterministic() {
        let g = parse_predicate("G(n, s) := n * n < s").unwrap();
        let e = Enumerator::guard("sq", g, None).unwrap();
        let mut prev = BTreeSet::new();
        for s in 0..60 {
            let cur = e.enumerate_upto(s);
            assert!(prev.is_subset(&cur));
            assert_eq!(cur, e.enumerate_upto(s));
            prev = cur;
        }
    }
}
