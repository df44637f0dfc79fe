use std::path::PathBuf;

use anyhow::{Context, Result};
use ce_core::audit::{audit as audit_trace, inject, Fault, Status};
use ce_core::priority::{Engine, RunConfig, Trace};
use clap::Args;

use crate::{print_out, read, AuditFailed};

#[derive(Args)]
pub struct RunArgs {
    /// RunConfig JSON.
    #[arg(long, conflicts_with = "default", required_unless_present = "default")]
    config: Option<PathBuf>,
    /// Use the built-in two-tree configuration.
    #[arg(long)]
    default: bool,
    /// Override the configured stage count.
    #[arg(long)]
    stages: Option<u64>,
    /// Corrupt the finished trace with a known fault, e.g. `d-overlap`.
    #[arg(long, value_parser = parse_fault)]
    inject: Option<Fault>,
    /// Trace output (JSON lines).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct AuditArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Run only these checks; repeatable.
    #[arg(long = "check")]
    checks: Vec<String>,
    /// Report output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_fault(s: &str) -> std::result::Result<Fault, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| {
        let names: Vec<String> = Fault::ALL
            .iter()
            .map(|f| serde_json::to_value(f).unwrap().as_str().unwrap().to_string())
            .collect();
        format!("unknown fault `{s}`; expected one of {}", names.join(", "))
    })
}

pub fn run(args: RunArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_json(&read(path)?)?,
        None => RunConfig::default_two_tree(),
    };
    if let Some(s) = args.stages {
        cfg.stages = s;
        cfg.validate()?;
    }
    let mut trace = Engine::run(cfg)?;
    if let Some(fault) = args.inject {
        trace = inject(fault, &trace)?;
    }
    let file = std::fs::File::create(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    trace.write_jsonl(std::io::BufWriter::new(file))?;
    println!("{}", trace.digest());
    Ok(())
}

pub fn audit(args: AuditArgs) -> Result<()> {
    let text = read(&args.trace)?;
    let trace = Trace::from_jsonl(&text)?;
    let names: Vec<&str> = args.checks.iter().map(String::as_str).collect();
    let report = audit_trace(&trace, &names)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, report.to_json() + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            for c in &report.checks {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Na => "na",
                };
                println!("{:<12} {:<4} {}", c.name, status, c.detail);
            }
        }
        None => print_out(&report.to_json())?,
    }
    if report.passed() {
        Ok(())
    } else {
        Err(AuditFailed.into())
    }
}
