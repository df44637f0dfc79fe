use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use ce_core::effective::{parse_predicate, PredicateSpec};
use ce_core::hierarchy::{
    height2_signature, one_witness_machine, reduction_trace, t2_a, t3_a, t_pi2, t_pi3, t_pin,
    t_sigma3, t_sigman, tn_a, NormalForm,
};
use ce_core::tree::TreeSpec;
use clap::{Subcommand, ValueEnum};
use serde_json::json;

use crate::{read, Output, ParseFailure};

#[derive(Subcommand)]
pub enum PinCmd {
    /// Truncation and level-1 signature of a tree family.
    Family {
        #[arg(long, value_enum)]
        level: Level,
        /// Index for `pin` and `sigman` (at least 3).
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        width: u64,
        /// Also list the nodes up to this depth.
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Reduce a predicate in normal form to a tree at one argument.
    Reduce {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, default_value_t = 0)]
        n: u64,
        #[arg(long, default_value_t = 50)]
        stages: u64,
        /// 2: `∀x ∃y R(n,x,y)`. 3: `∃x ∀y S(n,x,y)`. Higher levels lift the
        /// level-3 form, with one extra leading argument per level.
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Run the witness machine for `∀y S(n,x,y)` and dump its table.
    Witness {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, default_value_t = 200)]
        stages: u64,
        /// Report `n` below this.
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Level {
    Pi2,
    Pi3,
    Sigma3,
    Pin,
    Sigman,
}

/// Parses a predicate file, echoing the offending line with a caret.
fn load_pred(path: &Path) -> Result<PredicateSpec> {
    let text = read(path)?;
    match parse_predicate(&text) {
        Ok(p) => Ok(p),
        Err(err) => {
            let pos = match &err {
                ce_core::Error::Syntax { pos, .. } | ce_core::Error::Unbound { pos, .. } => *pos,
                _ => return Err(err.into()),
            };
            let pos = pos.min(text.len());
            let line_start = text[..pos].rfind('\n').map_or(0, |i| i + 1);
            let line_end = text[pos..].find('\n').map_or(text.len(), |i| pos + i);
            let line_no = text[..pos].matches('\n').count() + 1;
            let col = text[line_start..pos].chars().count() + 1;
            Err(ParseFailure(format!(
                "{}:{line_no}:{col}: {err}\n  {}\n  {}^",
                path.display(),
                &text[line_start..line_end],
                " ".repeat(col - 1)
            ))
            .into())
        }
    }
}

fn level1_count(t: &TreeSpec, width: u64) -> usize {
    t.children(&[], width).len()
}

pub fn run(cmd: PinCmd) -> Result<()> {
    match cmd {
        PinCmd::Family {
            level,
            n,
            width,
            depth,
            out,
        } => {
            let (name, t) = match level {
                Level::Pi2 => ("pi2".to_string(), t_pi2()),
                Level::Pi3 => ("pi3".to_string(), t_pi3()),
                Level::Sigma3 => ("sigma3".to_string(), t_sigma3()),
                Level::Pin => (format!("pi{}", n + 1), t_pin(n)?),
                Level::Sigman => (format!("sigma{}", n + 1), t_sigman(n)?),
            };
            let sig = height2_signature(&t, width);
            let mut v = json!({
                "family": name,
                "width": width,
                "level1_nodes": level1_count(&t, width),
                "signature": sig,
            });
            if let Some(d) = depth {
                v["nodes"] = json!(t.truncate(d, width).nodes().collect::<Vec<_>>());
            }
            out.emit(&serde_json::to_string_pretty(&v)?)
        }
        PinCmd::Reduce {
            pred,
            n,
            stages,
            level,
            out,
        } => {
            let p = load_pred(&pred)?;
            let v = match level {
                0 | 1 => bail!("level must be at least 2"),
                2 => {
                    let t = t2_a(&p, n)?;
                    let trace = reduction_trace(&p, n, stages)?;
                    json!({
                        "level": 2,
                        "n": n,
                        "stages": stages,
                        "level1_nodes": level1_count(&t, stages),
                        "expansionary": trace.expansionary,
                        "lengths": trace.l,
                    })
                }
                3 => {
                    let t = t3_a(one_witness_machine(&p)?, n);
                    reduced(3, n, stages, &t)
                }
                l => {
                    let mut form = NormalForm::Sigma3(p);
                    for _ in 3..l {
                        form = NormalForm::Lift(Box::new(form));
                    }
                    let t = tn_a(l, &form, n)?;
                    reduced(l, n, stages, &t)
                }
            };
            out.emit(&serde_json::to_string_pretty(&v)?)
        }
        PinCmd::Witness {
            pred,
            stages,
            bound,
            out,
        } => {
            let p = load_pred(&pred)?;
            let mut m = one_witness_machine(&p)?;
            m.run_to(stages);
            if let Err(e) = m.check_invariants() {
                bail!("witness machine invariant broken: {e}");
            }
            let witnesses: Vec<_> = (0..bound)
                .map(|n| json!({ "n": n, "witness": m.stable_witness(n, stages) }))
                .collect();
            let domain: Vec<u64> = (0..bound)
                .filter(|&n| m.stable_witness(n, stages).is_some())
                .collect();
            let markers: Vec<_> = (0..bound).map(|n| m.markers(n).to_vec()).collect();
            let r_table: Vec<_> = (1..=stages).map(|s| m.column(s).unwrap_or(&[]).to_vec()).collect();
            let v = json!({
                "stages": stages,
                "bound": bound,
                "domain": domain,
                "witnesses": witnesses,
                "markers": markers,
                "r_table": r_table,
            });
            out.emit(&serde_json::to_string_pretty(&v)?)
        }
    }
}

fn reduced(level: usize, n: u64, width: u64, t: &TreeSpec) -> serde_json::Value {
    let level1: Vec<u64> = t.children(&[], width).into_iter().map(|c| c[0]).collect();
    let children: Vec<_> = level1
        .iter()
        .map(|&a| json!({ "address": a, "children": t.children(&[a], width).len() }))
        .collect();
    json!({
        "level": level,
        "n": n,
        "width": width,
        "level1_nodes": level1.len(),
        "level1": children,
    })
}
