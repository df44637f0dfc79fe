mod common;

use ce_core::audit::{
    audit, audit_homogeneity, audit_requirement_containment, inject, Fault, Status, CHECKS,
};
use ce_core::priority::{Engine, RunConfig, Trace};
use ce_core::tree::FiniteTree;

fn default_trace(stages: u64) -> Trace {
    Engine::run(RunConfig {
        stages,
        ..RunConfig::default_two_tree()
    })
    .unwrap()
}

#[test]
fn clean_run_passes_every_check() {
    let trace = default_trace(2000);
    let report = audit(&trace, &[]).unwrap();
    assert_eq!(report.checks.len(), CHECKS.len());
    assert!(report.passed(), "{}", report.to_json());
    for name in ["partitions", "discipline", "allowed", "markers", "permanence", "homogeneity", "friedberg"] {
        assert_eq!(report.get(name).unwrap().status, Status::Pass, "{name}");
    }
    assert_eq!(report.get("hemimaximal").unwrap().status, Status::Na);
    assert_eq!(report.threshold, 10);
}

#[test]
fn audits_are_pure() {
    let trace = default_trace(800);
    let a = audit(&trace, &[]).unwrap().to_json();
    let b = audit(&trace, &[]).unwrap().to_json();
    assert_eq!(a, b);
    let reread = Trace::from_jsonl(&trace.to_jsonl()).unwrap();
    assert_eq!(audit(&reread, &[]).unwrap().to_json(), a);
}

#[test]
fn every_fault_is_flagged_with_a_witness() {
    let trace = default_trace(2000);
    for fault in Fault::ALL {
        let bad = inject(fault, &trace).unwrap();
        let report = audit(&bad, &[fault.check()]).unwrap();
        let c = &report.checks[0];
        assert_eq!(c.status, Status::Fail, "{fault:?}: {}", c.detail);
        let w = c.witness.as_ref().unwrap();
        assert!(w.stage >= 1 && w.stage <= 2000);
        assert!(!w.addresses.is_empty() || w.element.is_some(), "{fault:?}");
    }
}

#[test]
fn unknown_check_is_a_config_error() {
    let trace = default_trace(5);
    assert!(audit(&trace, &["nonsense"]).is_err());
}

#[test]
fn per_tree_views_agree() {
    let trace = default_trace(500);
    let views = trace.split_by_tree();
    assert_eq!(views.len(), 2);
    assert_eq!(audit_homogeneity(&views).unwrap().status, Status::Pass);
    for v in &views {
        let report = audit(v, &["homogeneity"]).unwrap();
        assert_eq!(report.checks[0].status, Status::Pass);
    }
    let mut other = default_trace(20);
    other.header.run_id = "elsewhere".into();
    assert!(audit_homogeneity(&[views[0].clone(), other]).is_err());
}

#[test]
fn single_tree_homogeneity_is_vacuous() {
    let trace = Engine::run(RunConfig {
        trees: vec![FiniteTree::closure_of([vec![0]])],
        stages: 200,
        ..RunConfig::default_two_tree()
    })
    .unwrap();
    let c = &audit(&trace, &["homogeneity"]).unwrap().checks[0];
    assert_eq!(c.status, Status::Pass);
    assert!(c.detail.contains("vacuous"));
}

#[test]
fn empty_trace_is_not_applicable() {
    let trace = default_trace(0);
    let report = audit(&trace, &[]).unwrap();
    assert!(report.passed());
    assert_eq!(report.get("markers").unwrap().status, Status::Na);
}

#[test]
fn containment_reports_patterns_without_failing() {
    let trace = default_trace(1500);
    let c = audit_requirement_containment(&trace, 0, 1500, 10).unwrap();
    assert_eq!(c.e, 0);
    assert!(audit(&trace, &["containment"]).unwrap().passed());
}

#[test]
fn hemimaximal_run_passes_every_check() {
    let trace = Engine::run(common::hemi_config(1500)).unwrap();
    let report = audit(&trace, &[]).unwrap();
    assert!(report.passed(), "{}", report.to_json());
    assert_eq!(report.get("hemimaximal").unwrap().status, Status::Pass);
}
