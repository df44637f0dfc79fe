//! The moving-marker machine that turns a `Π⁰₁` relation `A(n, x)` into a
//! `Π⁰₁` partial function `f` with `dom f = dom A`.
//!
//! `f(n) = a` iff `R(n, a, t)` holds for every `t`, where `R` is built stage
//! by stage here.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::effective::PredicateSpec;
use crate::error::Result;

/// `c(n, x)` together with the number of times it has been reinitialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Marker {
    pub value: u64,
    pub generation: u64,
}

#[derive(Debug, Clone, Copy)]
enum Search {
    /// `S(n, x, y)` holds for every `y < upto`.
    Alive { upto: u64 },
    Dead,
}

#[derive(Debug, Clone)]
pub struct MarkerMachine {
    s_pred: PredicateSpec,
    prefix: Vec<u64>,
    /// `markers[n][x]` for `x < stage`; markers at or above the stage still
    /// hold their initial value `x`.
    markers: Vec<Vec<Marker>>,
    /// Next fresh value per `n`.
    large: Vec<u64>,
    search: Vec<Vec<Search>>,
    /// `columns[s][n]`: the unique `z < s` with `R(n, z, s)`, for `n < s`.
    columns: Vec<Vec<Option<u64>>>,
    stage: u64,
}

/// Builds the machine for `A(n, x) ⟺ ∀y S(n, x, y)`; `s_pred` takes `(n, x, y)`.
pub fn one_witness_machine(s_pred: &PredicateSpec) -> Result<MarkerMachine> {
    MarkerMachine::with_prefix(s_pred, Vec::new())
}

impl MarkerMachine {
    /// Machine for `S(p₁, …, p_k, n, x, y)` with the leading arguments fixed.
    pub fn with_prefix(s_pred: &PredicateSpec, prefix: Vec<u64>) -> Result<Self> {
        s_pred.expect_arity(prefix.len() + 3)?;
        Ok(MarkerMachine {
            s_pred: s_pred.clone(),
            prefix,
            markers: Vec::new(),
            large: Vec::new(),
            search: Vec::new(),
            columns: vec![Vec::new()],
            stage: 0,
        })
    }

    /// Last completed stage.
    pub fn stage(&self) -> u64 {
        self.stage
    }

    fn s_holds(&self, n: u64, x: u64, y: u64) -> bool {
        let mut args = Vec::with_capacity(self.prefix.len() + 3);
        args.extend_from_slice(&self.prefix);
        args.extend_from_slice(&[n, x, y]);
        self.s_pred.eval_unchecked(&args)
    }

    /// Whether `∀y < s S(n, x, y)`, extending the cached search as needed.
    fn survives(&mut self, n: usize, x: usize, s: u64) -> bool {
        let Search::Alive { mut upto } = self.search[n][x] else {
            return false;
        };
        while upto < s {
            if !self.s_holds(n as u64, x as u64, upto) {
                self.search[n][x] = Search::Dead;
                return false;
            }
            upto += 1;
        }
        self.search[n][x] = Search::Alive { upto };
        true
    }

    fn fresh(&mut self, n: usize, s: u64) -> u64 {
        let v = self.large[n].max(s);
        self.large[n] = v + 1;
        v
    }

    /// Runs stage `stage + 1`.
    pub fn step(&mut self) {
        let s = self.stage + 1;
        let su = s as usize;
        // new row n = s-1, and new column x = s-1 in every row
        self.markers.push(Vec::new());
        self.search.push(Vec::new());
        self.large.push(0);
        for n in 0..su {
            while self.markers[n].len() < su {
                let x = self.markers[n].len() as u64;
                let mut m = Marker {
                    value: x,
                    generation: 0,
                };
                // the initial value may already have been handed out
                if self.large[n] > x {
                    m = Marker {
                        value: self.fresh(n, s),
                        generation: 1,
                    };
                }
                self.markers[n].push(m);
                self.search[n].push(Search::Alive { upto: 0 });
            }
        }
        let mut column = vec![None; su];
        for n in 0..su {
            let witness = (0..su).find(|&x| self.survives(n, x, s));
            for x in 0..su {
                if Some(x) == witness {
                    continue;
                }
                // a value at or above the stage is still large
                if self.markers[n][x].value < s {
                    let v = self.fresh(n, s);
                    let m = &mut self.markers[n][x];
                    m.value = v;
                    m.generation += 1;
                }
            }
            if let Some(x) = witness {
                let v = self.markers[n][x].value;
                if v < s {
                    column[n] = Some(v);
                }
            }
        }
        self.columns.push(column);
        self.stage = s;
    }

    pub fn run_to(&mut self, s: u64) {
        while self.stage < s {
            self.step();
        }
    }

    /// `R(n, z, s)`, or `None` when stage `s` has not been run.
    pub fn r_holds(&self, n: u64, z: u64, s: u64) -> Option<bool> {
        if s > self.stage {
            return None;
        }
        if n >= s || z >= s {
            return Some(true);
        }
        Some(self.columns[s as usize][n as usize] == Some(z))
    }

    /// The values `z < s` with `R(n, z, s)` at stage `s`.
    pub fn column(&self, s: u64) -> Option<&[Option<u64>]> {
        self.columns.get(s as usize).map(Vec::as_slice)
    }

    /// Current `c(n, x)`.
    pub fn marker(&self, n: u64, x: u64) -> Marker {
        self.markers
            .get(n as usize)
            .and_then(|row| row.get(x as usize))
            .copied()
            .unwrap_or(Marker {
                value: x,
                generation: 0,
            })
    }

    /// Markers `c(n, x)` for `x < stage`.
    pub fn markers(&self, n: u64) -> &[Marker] {
        self.markers.get(n as usize).map_or(&[], Vec::as_slice)
    }

    /// The value `a < through` with `R(n, a, t)` for every computed
    /// `t ∈ (max(n, a), through]`, if the machine currently shows one.
    pub fn stable_witness(&self, n: u64, through: u64) -> Option<u64> {
        let through = through.min(self.stage);
        let a = (*self.columns.get(through as usize)?.get(n as usize)?)?;
        let from = n.max(a) + 1;
        (from..=through)
            .all(|t| self.r_holds(n, a, t) == Some(true))
            .then_some(a)
    }

    /// Checks the stage invariants at every computed stage.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for s in 1..=self.stage {
            let column = &self.columns[s as usize];
            if column.len() != s as usize {
                return Err(format!("stage {s}: column has {} rows", column.len()));
            }
            for (n, z) in column.iter().enumerate() {
                if let Some(z) = z {
                    if *z >= s {
                        return Err(format!("stage {s}: R({n}, {z}, {s}) recorded above the stage"));
                    }
                }
            }
        }
        for (n, row) in self.markers.iter().enumerate() {
            let mut seen = BTreeMap::new();
            for (x, m) in row.iter().enumerate() {
                if let Some(other) = seen.insert(m.value, x) {
                    return Err(format!(
                        "c({n}, {other}) and c({n}, {x}) share value {}",
                        m.value
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::parse_predicate;

    fn machine(text: &str, stages: u64) -> MarkerMachine {
        let mut m = one_witness_machine(&parse_predicate(text).unwrap()).unwrap();
        m.run_to(stages);
        m.check_invariants().unwrap();
        m
    }

    fn domain(m: &MarkerMachine, bound: u64, through: u64) -> Vec<u64> {
        (0..bound)
            .filter(|&n| m.stable_witness(n, through).is_some())
            .collect()
    }

    #[test]
    fn doubling() {
        let m = machine("S(n,x,y) := x = 2*n", 200);
        assert_eq!(domain(&m, 10, 200), (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn evens() {
        let m = machine("S(n,x,y) := n mod 2 = 0 and x = n", 200);
        assert_eq!(domain(&m, 10, 200), vec![0, 2, 4, 6, 8]);
    }

    #[test]
    fn empty_relation() {
        let m = machine("S(n,x,y) := 1 = 0", 200);
        assert!(domain(&m, 10, 200).is_empty());
    }

    #[test]
    fn witness_found_late() {
        // x works for n only once y passes 5; the least witness settles then
        let m = machine("S(n,x,y) := x >= 3 or y < 5", 60);
        let a = m.stable_witness(0, 60).unwrap();
        assert_eq!(m.marker(0, 3).value, a);
        assert_eq!(m.column(60).unwrap()[0], Some(a));
    }

    #[test]
    fn boundary_convention() {
        let m = machine("S(n,x,y) := x = n", 20);
        for s in 1..=20 {
            assert_eq!(m.r_holds(s, 0, s), Some(true));
            assert_eq!(m.r_holds(0, s + 3, s), Some(true));
        }
        assert_eq!(m.r_holds(0, 0, 21), None);
        assert!(one_witness_machine(&parse_predicate("S(n,x) := x = n").unwrap()).is_err());
    }
}
