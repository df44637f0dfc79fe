//! Reductions into the height-2 and lifted families.
//!
//! `T_{3,A}(n)` puts a copy of `T_{Π₃}` on the even level-1 addresses and,
//! for every value `x`, a designated node `⟨2x + 1⟩`. The tree above the
//! designated node is read off the machine's `R(n, x, ·)` column as a
//! height-1 expansionary tree: `⟨2x+1, s⟩` is present iff `R(n, x, t)` has
//! held for every `t < s`. This is one reading of "the tree of the `Π⁰₂`
//! relation `f(n) = x`"; it grows without bound exactly when `x` is the
//! machine's eventual witness value.

use std::collections::HashMap;
use std::sync::Mutex;

use super::expansion::{agreement_length, expansion_tree};
use super::families::t_pi3;
use super::witness::MarkerMachine;
use crate::effective::PredicateSpec;
use crate::error::{Error, Result};
use crate::tree::{Tree, TreeSpec};

struct ThreeA {
    pi3: TreeSpec,
    machine: Mutex<MarkerMachine>,
    n: u64,
}

impl ThreeA {
    /// Whether `R(n, x, t)` held for every `t < s`.
    fn column_holds(&self, x: u64, s: u64) -> bool {
        let mut m = self.machine.lock().unwrap();
        m.run_to(s.saturating_sub(1));
        (0..s).all(|t| m.r_holds(self.n, x, t) != Some(false))
    }
}

impl Tree for ThreeA {
    fn contains(&self, node: &[u64]) -> bool {
        match node {
            [] => true,
            [a, rest @ ..] if a % 2 == 0 => {
                let mut inner = vec![a / 2];
                inner.extend_from_slice(rest);
                self.pi3.contains(&inner)
            }
            [_] => true,
            [a, s] => *s > 0 && self.column_holds(a / 2, *s),
            _ => false,
        }
    }
}

/// `T_{3,A}(n)` for the set `A = dom f` presented by `machine`.
pub fn t3_a(machine: MarkerMachine, n: u64) -> TreeSpec {
    TreeSpec::new(ThreeA {
        pi3: t_pi3(),
        machine: Mutex::new(machine),
        n,
    })
}

/// Address of the designated level-1 node for value `x` in [`t3_a`].
pub fn designated_address(x: u64) -> u64 {
    2 * x + 1
}

/// A set already brought into the normal form a reduction expects. Each
/// form is evaluated at a vector of leading arguments `(m, x₁, …)`.
#[derive(Debug, Clone)]
pub enum NormalForm {
    /// `A(args) ⟺ ∀x ∃y R(args, x, y)`; reduces to a height-1 tree.
    Pi2(PredicateSpec),
    /// `A(args) ⟺ ∃x ∀y S(args, x, y)`; reduces through the marker machine
    /// to a height-2 tree.
    Sigma3(PredicateSpec),
    /// Level-1 nodes `⟨x⟩` for every `x`, with the inner reduction at
    /// `(args, x)` above `⟨x⟩`.
    Lift(Box<NormalForm>),
}

impl NormalForm {
    /// Height of the trees this form reduces to plus one.
    pub fn level(&self) -> usize {
        match self {
            NormalForm::Pi2(_) => 2,
            NormalForm::Sigma3(_) => 3,
            NormalForm::Lift(inner) => inner.level() + 1,
        }
    }

    fn check(&self, args: usize) -> Result<()> {
        match self {
            NormalForm::Pi2(p) | NormalForm::Sigma3(p) => {
                if p.arity() != args + 2 {
                    return Err(Error::NormalForm(format!(
                        "`{}` must take {} leading arguments plus (x, y), has {} parameters",
                        p.name(),
                        args,
                        p.arity()
                    )));
                }
                Ok(())
            }
            NormalForm::Lift(inner) => inner.check(args + 1),
        }
    }

    fn build(&self, args: Vec<u64>) -> TreeSpec {
        match self {
            NormalForm::Pi2(r) => {
                let r = r.clone();
                let cap: u64 = args.iter().fold(0, |a, &b| a.saturating_add(b));
                expansion_tree(move |s| {
                    let mut full = args.clone();
                    full.extend([0, 0]);
                    let k = args.len();
                    agreement_length(
                        |x, y| {
                            let mut full = full.clone();
                            full[k] = x;
                            full[k + 1] = y;
                            r.eval_unchecked(&full)
                        },
                        s,
                        cap.saturating_add(s),
                    )
                })
            }
            NormalForm::Sigma3(p) => {
                let (n, prefix) = args.split_last().expect("checked arity");
                let machine = MarkerMachine::with_prefix(p, prefix.to_vec())
                    .expect("checked arity");
                t3_a(machine, *n)
            }
            NormalForm::Lift(inner) => TreeSpec::new(Lifted {
                inner: (**inner).clone(),
                args,
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }
}

struct Lifted {
    inner: NormalForm,
    args: Vec<u64>,
    cache: Mutex<HashMap<u64, TreeSpec>>,
}

impl Lifted {
    fn above(&self, x: u64) -> TreeSpec {
        let mut cache = self.cache.lock().unwrap();
        cache
            .entry(x)
            .or_insert_with(|| {
                let mut args = self.args.clone();
                args.push(x);
                self.inner.build(args)
            })
            .clone()
    }
}

impl Tree for Lifted {
    fn contains(&self, node: &[u64]) -> bool {
        match node {
            [] | [_] => true,
            [x, rest @ ..] => self.above(*x).contains(rest),
        }
    }
}

/// `T_{level,A}(m)` for a set given in normal form. `level` must equal the
/// form's level, and the predicates must take the matching arguments.
pub fn tn_a(level: usize, form: &NormalForm, m: u64) -> Result<TreeSpec> {
    if level < 2 {
        return Err(Error::Level { level, min: 2 });
    }
    if form.level() != level {
        return Err(Error::NormalForm(format!(
            "form has level {}, requested {level}",
            form.level()
        )));
    }
    form.check(1)?;
    Ok(form.build(vec![m]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::parse_predicate;
    use crate::hierarchy::{growing_level1, one_witness_machine, t_sigma3};

    fn pred(text: &str) -> PredicateSpec {
        parse_predicate(text).unwrap()
    }

    fn three_a(text: &str, n: u64) -> TreeSpec {
        t3_a(one_witness_machine(&pred(text)).unwrap(), n)
    }

    #[test]
    fn member_has_one_growing_designated_node() {
        let t = three_a("S(n,x,y) := x = 2*n", 3);
        let growing = growing_level1(&t, 120, 250, 500);
        assert_eq!(growing.len(), 1);
        assert_eq!(growing[0] % 2, 1);
    }

    #[test]
    fn nonmember_has_none() {
        let t = three_a("S(n,x,y) := n mod 2 = 0 and x = n", 3);
        assert!(growing_level1(&t, 120, 250, 500).is_empty());
    }

    #[test]
    fn contains_pi3_copy() {
        let t = three_a("S(n,x,y) := 1 = 0", 0);
        let pi3 = t_pi3();
        for a in 1..40 {
            assert_eq!(
                t.children(&[2 * a], 30).len(),
                pi3.children(&[a], 30).len()
            );
        }
        assert!(t.contains(&[designated_address(7)]));
        assert!(!t.contains(&[0]));
    }

    #[test]
    fn normal_form_checks() {
        let s = NormalForm::Sigma3(pred("S(m,x,y) := x = m"));
        assert!(tn_a(3, &s, 0).is_ok());
        assert!(matches!(tn_a(4, &s, 0), Err(Error::NormalForm(_))));
        assert!(matches!(tn_a(1, &s, 0), Err(Error::Level { .. })));
        let bad = NormalForm::Lift(Box::new(NormalForm::Sigma3(pred("S(m,x,y) := x = m"))));
        assert!(matches!(tn_a(4, &bad, 0), Err(Error::NormalForm(_))));
    }

    #[test]
    fn lifted_structure() {
        let form = NormalForm::Lift(Box::new(NormalForm::Pi2(pred(
            "R(m,k,x,y) := y >= x + k",
        ))));
        let t = tn_a(3, &form, 1).unwrap();
        assert_eq!(t.children(&[], 30).len(), 30);
        // above ⟨k⟩ the expansionary stages are exactly s > k
        assert_eq!(t.children(&[4], 30).len(), 25);
    }

    #[test]
    fn sigma_members_match_sigma3_growth() {
        let form = NormalForm::Sigma3(pred("S(m,x,y) := m mod 2 = 0 and x = m"));
        let reserved = growing_level1(&t_sigma3(), 10, 100, 200).len();
        for m in 0..4 {
            let t = tn_a(3, &form, m).unwrap();
            let expect = if m % 2 == 0 { reserved } else { 0 };
            assert_eq!(growing_level1(&t, 60, 100, 200).len(), expect, "m = {m}");
        }
    }
}
