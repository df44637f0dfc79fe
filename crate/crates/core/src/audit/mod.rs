//! Finitary checks on construction traces.
//!
//! Limit notions are audited through stage-level surrogates: `=*` and
//! "infinite" use the run's threshold, Friedberg splits are checked as
//! balanced part counts, and the containment patterns are reported without
//! ever failing a run.

mod checks;
mod faults;
mod report;

use rayon::prelude::*;

pub use checks::{
    audit_allowed, audit_ball_discipline, audit_containment_all, audit_dump_permanence,
    audit_friedberg, audit_hemimaximal, audit_homogeneity, audit_homogeneity_trace,
    audit_marker_monotonicity, audit_partitions, audit_requirement_containment, Containment,
    Pattern,
};
pub use faults::{inject, Fault};
pub use report::{AuditReport, CheckResult, Status, Witness};

use crate::error::{Error, Result};
use crate::priority::Trace;

pub const CHECKS: [&str; 9] = [
    "partitions",
    "discipline",
    "allowed",
    "markers",
    "permanence",
    "homogeneity",
    "friedberg",
    "containment",
    "hemimaximal",
];

pub fn run_check(name: &str, trace: &Trace) -> Result<CheckResult> {
    Ok(match name {
        "partitions" => audit_partitions(trace),
        "discipline" => audit_ball_discipline(trace),
        "allowed" => audit_allowed(trace),
        "markers" => audit_marker_monotonicity(trace),
        "permanence" => audit_dump_permanence(trace),
        "homogeneity" => audit_homogeneity_trace(trace),
        "friedberg" => audit_friedberg(trace),
        "containment" => audit_containment_all(trace),
        "hemimaximal" => audit_hemimaximal(trace),
        other => return Err(Error::Config(format!("unknown check {other:?}"))),
    })
}

/// Thread cap from `CE_WORKBENCH_THREADS`, if set to a positive number.
pub fn thread_cap() -> Option<usize> {
    std::env::var("CE_WORKBENCH_THREADS")
        .ok()?
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Runs the named checks (all of them when `names` is empty) in parallel.
pub fn audit(trace: &Trace, names: &[&str]) -> Result<AuditReport> {
    let names: Vec<&str> = if names.is_empty() {
        CHECKS.to_vec()
    } else {
        names.to_vec()
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let checks = pool.install(|| {
        names
            .par_iter()
            .map(|n| run_check(n, trace))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(AuditReport {
        run_id: trace.header.run_id.clone(),
        stages: trace.stages.last().map_or(0, |r| r.s),
        threshold: trace.header.config.threshold,
        checks,
    })
}
