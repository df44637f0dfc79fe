use ce_core::effective::parse_predicate;
use ce_core::hierarchy::{
    designated_address, growing_level1, height2_signature, one_witness_machine, reduction_trace,
    t2_a, t3_a, t_pi3, t_pin, t_sigma3, t_sigman, tn_a, NormalForm,
};

fn pred(text: &str) -> ce_core::effective::PredicateSpec {
    parse_predicate(text).unwrap()
}

/// `∀x < bound ∃y < bound R(n, x, y)` by direct evaluation.
fn pi2_bounded(text: &str, n: u64, bound: u64) -> bool {
    let r = pred(text);
    (0..bound).all(|x| (0..bound).any(|y| r.eval(&[n, x, y]).unwrap()))
}

#[test]
fn always_expansionary_predicate_gives_one_node_per_stage() {
    let t = t2_a(&pred("R(n,x,y) := y >= x"), 0).unwrap();
    // λ plus ⟨1⟩ … ⟨49⟩
    assert_eq!(t.truncate(1, 50).len(), 50);
    let trace = reduction_trace(&pred("R(n,x,y) := y >= x"), 0, 50).unwrap();
    assert_eq!(trace.expansionary, (1..=50).collect::<Vec<_>>());
}

#[test]
fn t2a_grows_exactly_on_true_instances() {
    for text in [
        "R(n,x,y) := y >= x",
        "R(n,x,y) := x < n",
        "R(n,x,y) := n mod 2 = 0 or x+y < 5",
    ] {
        for n in 0..8 {
            let t = t2_a(&pred(text), n).unwrap();
            let grows = [25u64, 50, 100]
                .iter()
                .all(|&s| t.truncate(1, 2 * s).len() > t.truncate(1, s).len());
            assert_eq!(grows, pi2_bounded(text, n, 60), "{text} at n = {n}");
        }
    }
}

#[test]
fn machine_domains_match_brute_force() {
    let cases: [(&str, fn(u64) -> bool); 3] = [
        ("S(n,x,y) := x = 2*n", |_| true),
        ("S(n,x,y) := n mod 2 = 0 and x = n", |n| n % 2 == 0),
        ("S(n,x,y) := false", |_| false),
    ];
    for (text, dom) in cases {
        let mut m = one_witness_machine(&pred(text)).unwrap();
        for s in 1..=200 {
            m.run_to(s);
            m.check_invariants().unwrap();
        }
        for n in 0..10 {
            assert_eq!(m.stable_witness(n, 200).is_some(), dom(n), "{text} at n = {n}");
        }
    }
}

#[test]
fn t3a_grows_only_at_the_witness() {
    let mut m = one_witness_machine(&pred("S(n,x,y) := x = 2*n")).unwrap();
    let t = t3_a(m.clone(), 3);
    m.run_to(80);
    let a = m.stable_witness(3, 80).unwrap();
    let growing = growing_level1(&t, 2 * a + 10, 40, 80);
    assert_eq!(growing, vec![designated_address(a)]);
}

#[test]
fn t3a_of_an_empty_domain_has_no_growing_designated_node() {
    let m = one_witness_machine(&pred("S(n,x,y) := false")).unwrap();
    let t = t3_a(m, 2);
    assert!(growing_level1(&t, 30, 40, 80).is_empty());
}

#[test]
fn pi3_and_sigma3_censuses() {
    let pi = height2_signature(&t_pi3(), 200);
    for n in 0..=6 {
        assert!(pi[&n] >= 3, "n = {n}");
    }
    let sigma = height2_signature(&t_sigma3(), 200);
    let wide: usize = sigma.range(200..).map(|(_, c)| c).sum();
    assert_eq!(wide, 1);
    assert!(pi.range(200..).next().is_none());
}

#[test]
fn lifted_families_nest() {
    let pi4 = t_pin(3).unwrap();
    let sigma4 = t_sigman(3).unwrap();
    assert!(!pi4.contains(&[0]));
    assert!(sigma4.contains(&[0]));
    assert!(t_pin(2).is_err());
}

#[test]
fn tn_a_checks_levels_and_arity() {
    let form = NormalForm::Pi2(pred("R(m,x,y) := y >= x"));
    let t = tn_a(2, &form, 0).unwrap();
    assert!(t.contains(&[5]));
    assert!(tn_a(3, &form, 0).is_err());
    let bad = NormalForm::Pi2(pred("R(x,y) := y >= x"));
    assert!(tn_a(2, &bad, 0).is_err());
}
