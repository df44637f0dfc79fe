use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::effective::{parse_predicate, Enumerator, EnumeratorTable};
use crate::error::{Error, Result};
use crate::tree::FiniteTree;

/// How an input enumerator is given in a run configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnumeratorConfig {
    Table(EnumeratorTable),
    /// `guard` is a predicate definition over `(n, s)`.
    Guard {
        id: String,
        guard: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lag: Option<u64>,
    },
}

impl EnumeratorConfig {
    pub fn id(&self) -> &str {
        match self {
            EnumeratorConfig::Table(t) => &t.id,
            EnumeratorConfig::Guard { id, .. } => id,
        }
    }

    pub fn build(&self) -> Result<Enumerator> {
        match self {
            EnumeratorConfig::Table(t) => Enumerator::from_table(t),
            EnumeratorConfig::Guard { id, guard, lag } => {
                let p = parse_predicate(guard)?;
                Enumerator::guard(id.clone(), p, *lag)
            }
        }
    }
}

/// Inputs of the hemimaximal mode: `m = h ⊔ h_breve` at every stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HemiInputs {
    pub m: EnumeratorConfig,
    pub h: EnumeratorConfig,
    pub h_breve: EnumeratorConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Hemimaximal(HemiInputs),
}

fn default_threshold() -> usize {
    10
}
fn default_guess_alphabet() -> u64 {
    2
}
fn default_max_depth() -> usize {
    6
}
fn default_marker_window() -> usize {
    4
}
fn default_ekl_triples() -> u64 {
    8
}
fn default_true() -> bool {
    true
}
fn default_mode() -> Mode {
    Mode::Standard
}

/// A complete, self-describing run of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// The coded trees `T_0, T_1, …`.
    pub trees: Vec<FiniteTree>,
    /// `W_0, W_1, …`.
    pub enumerators: Vec<EnumeratorConfig>,
    pub stages: u64,
    /// Size below which a finite intersection counts as "finite".
    #[serde(default = "default_threshold")]
    pub threshold: usize,
    /// Number of guess values carried by each outcome of the strategy tree.
    #[serde(default = "default_guess_alphabet")]
    pub guess_alphabet: u64,
    /// Strategy nodes deeper than this are not built.
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    /// Markers `Γ_e` with `e` below this are written to the trace.
    #[serde(default = "default_marker_window")]
    pub marker_window: usize,
    /// Number of `⟨e,k,l⟩` coordinates compared when choosing winners.
    #[serde(default = "default_ekl_triples")]
    pub ekl_triples: u64,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    /// Registered pairs `(e, ĕ)` whose snapshots may witness a split.
    #[serde(default)]
    pub splits: Vec<(usize, usize)>,
    /// Apply every dump decision to all coded trees. Turning this off breaks
    /// homogeneity on purpose.
    #[serde(default = "default_true")]
    pub homogeneity_sync: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Two small trees, four guard enumerators and 10 000 stages.
    pub fn default_two_tree() -> Self {
        let g = |id: &str, body: &str| EnumeratorConfig::Guard {
            id: id.into(),
            guard: format!("G(n, s) := s = n + 1 and ({body})"),
            lag: Some(1),
        };
        RunConfig {
            trees: vec![
                FiniteTree::closure_of([vec![0, 0], vec![1]]),
                FiniteTree::closure_of([vec![0], vec![1, 0]]),
            ],
            enumerators: vec![
                g("evens", "n mod 2 = 0"),
                g("thirds", "n mod 3 = 1"),
                g("all", "true"),
                g("fives", "n mod 5 < 2"),
            ],
            stages: 10_000,
            threshold: default_threshold(),
            guess_alphabet: default_guess_alphabet(),
            max_depth: default_max_depth(),
            marker_window: default_marker_window(),
            ekl_triples: default_ekl_triples(),
            mode: Mode::Standard,
            splits: vec![(0, 1)],
            homogeneity_sync: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trees.is_empty() {
            return Err(Error::Config("at least one tree is required".into()));
        }
        for (k, t) in self.trees.iter().enumerate() {
            if !t.contains(&[]) {
                return Err(Error::Config(format!("tree {k} is empty")));
            }
        }
        if self.guess_alphabet == 0 {
            return Err(Error::Config("guess_alphabet must be positive".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::Config("max_depth must be positive".into()));
        }
        if self.enumerators.len() > 60 {
            return Err(Error::Config("at most 60 enumerators are supported".into()));
        }
        for &(a, b) in &self.splits {
            if a >= self.enumerators.len() || b >= self.enumerators.len() || a == b {
                return Err(Error::Config(format!("split ({a}, {b}) names unknown enumerators")));
            }
        }
        for e in &self.enumerators {
            e.build()?;
        }
        if let Mode::Hemimaximal(h) = &self.mode {
            check_split(h, self.stages)?;
        }
        Ok(())
    }

    /// Stable identifier: a digest of the serialized configuration.
    pub fn run_id(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        hex::encode(&digest[..8])
    }
}

/// Checks `m = h ⊔ h_breve` at every stage up to `stages` (and at every
/// stage named in a table).
pub fn check_split(h: &HemiInputs, stages: u64) -> Result<()> {
    let m = h.m.build()?;
    let a = h.h.build()?;
    let b = h.h_breve.build()?;
    let mut checkpoints: BTreeMap<u64, ()> = (0..=stages.min(2_000)).map(|s| (s, ())).collect();
    for cfg in [&h.m, &h.h, &h.h_breve] {
        if let EnumeratorConfig::Table(t) = cfg {
            for k in t.stages.keys() {
                if let Ok(s) = k.parse::<u64>() {
                    checkpoints.insert(s, ());
                }
            }
        }
    }
    for &s in checkpoints.keys() {
        let (ms, hs, bs) = (m.enumerate_upto(s), a.enumerate_upto(s), b.enumerate_upto(s));
        if let Some(x) = hs.intersection(&bs).next() {
            return Err(Error::Config(format!(
                "hemimaximal inputs overlap at stage {s} on {x}"
            )));
        }
        let union: std::collections::BTreeSet<u64> = hs.union(&bs).copied().collect();
        if union != ms {
            let x = union.symmetric_difference(&ms).next().copied().unwrap_or(0);
            return Err(Error::Config(format!(
                "hemimaximal inputs do not split m at stage {s}: {x} differs"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let c = RunConfig::default_two_tree();
        c.validate().unwrap();
        let back = RunConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.run_id(), c.run_id());
    }

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::from_json(r#"{"trees":[{"nodes":[[]]}],"enumerators":[],"stages":5}"#)
            .unwrap();
        assert_eq!(c.threshold, 10);
        assert_eq!(c.mode, Mode::Standard);
        assert!(c.homogeneity_sync);
    }

    #[test]
    fn rejects_bad_split_tables() {
        let t = |id: &str, xs: &[u64]| {
            EnumeratorConfig::Table(EnumeratorTable {
                id: id.into(),
                stages: BTreeMap::from([("1".to_string(), xs.to_vec())]),
            })
        };
        let ok = HemiInputs {
            m: t("m", &[0, 2, 4]),
            h: t("h", &[0, 4]),
            h_breve: t("hb", &[2]),
        };
        assert!(check_split(&ok, 10).is_ok());
        let overlap = HemiInputs {
            h_breve: t("hb", &[2, 4]),
            ..ok.clone()
        };
        assert!(check_split(&overlap, 10).is_err());
        let short = HemiInputs {
            h_breve: t("hb", &[]),
            ..ok
        };
        assert!(check_split(&short, 10).is_err());
    }
}
