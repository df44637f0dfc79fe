//! JSONL trace: one header line, then one record per stage.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::error::{Error, Result};

pub type Path = Vec<u64>;

/// `λ` for the root, otherwise the outcome codes joined by dots.
pub fn path_str(p: &[u64]) -> String {
    if p.is_empty() {
        return "λ".into();
    }
    p.iter().map(u64::to_string).collect::<Vec<_>>().join(".")
}

pub fn parse_path(s: &str) -> Result<Path> {
    if s == "λ" {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|c| {
            c.parse::<u64>()
                .map_err(|_| Error::Trace(format!("bad path component {c:?} in {s:?}")))
        })
        .collect()
}

/// `a <_L b`: `a` branches off strictly to the left of `b`.
pub fn left_of(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .find(|(x, y)| x != y)
        .is_some_and(|(x, y)| x < y)
}

pub fn common_prefix(a: &[u64], b: &[u64]) -> Path {
    a.iter().zip(b).take_while(|(x, y)| x == y).map(|(x, _)| *x).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Shift,
    Down,
    Pull,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub x: u64,
    pub from: String,
    pub to: String,
    pub kind: MoveKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpTarget {
    pub path: String,
    /// The element that entered `M`; `None` when the marker was unset.
    pub x: Option<u64>,
}

/// One dump decision `(n, i, p)` applied to tree `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dump {
    pub k: usize,
    pub n: usize,
    pub i: u64,
    pub p: usize,
    pub at: String,
    pub targets: Vec<DumpTarget>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerRecord {
    pub k: usize,
    pub path: String,
    pub e: usize,
    pub x: u64,
    /// `'1'` at position `e'` iff `x ∈ W_{e'}`; position 0 is most significant.
    pub state: String,
    pub gen: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Elements of `M^k_α`.
    Even,
    /// First pulled balls, entering `E_α`.
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartRecord {
    pub k: usize,
    pub path: String,
    pub side: Side,
    pub part: usize,
    pub x: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StageRecord {
    pub s: u64,
    pub f: Vec<u64>,
    pub moves: Vec<Move>,
    pub dumps: Vec<Dump>,
    /// New elements per store: `R@path`, `E@path`, `D@k:path`, `M@k:path`, `H@k:path`.
    pub enumerations: BTreeMap<String, Vec<u64>>,
    pub markers: Vec<MarkerRecord>,
    pub parts: Vec<PartRecord>,
    pub allowed: Vec<(u64, String)>,
}

impl StageRecord {
    pub fn enumerate(&mut self, key: String, x: u64) {
        self.enumerations.entry(key).or_default().push(x);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub run_id: String,
    pub config: RunConfig,
    /// Set on the per-tree views produced by [`Trace::split_by_tree`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub header: Header,
    pub stages: Vec<StageRecord>,
}

/// Store keys name their tree as `X@k:path`.
pub fn key_tree(key: &str) -> Option<usize> {
    let (_, rest) = key.split_once('@')?;
    let (k, _) = rest.split_once(':')?;
    k.parse().ok()
}

impl Trace {
    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        serde_json::to_writer(&mut out, &self.header)?;
        out.write_all(b"\n")?;
        for r in &self.stages {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn read_jsonl(input: impl BufRead) -> Result<Self> {
        let mut lines = input.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::Trace("empty trace".into()))??;
        let header: Header = serde_json::from_str(&first)
            .map_err(|e| Error::Trace(format!("header: {e}")))?;
        let mut stages = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let r: StageRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Trace(format!("line {}: {e}", i + 2)))?;
            stages.push(r);
        }
        Ok(Trace { header, stages })
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        Self::read_jsonl(text.as_bytes())
    }

    /// SHA-256 of the JSONL bytes, hex encoded.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_jsonl().as_bytes()))
    }

    /// One view per coded tree: shared stores plus that tree's own records.
    pub fn split_by_tree(&self) -> Vec<Trace> {
        (0..self.header.config.trees.len())
            .map(|k| Trace {
                header: Header {
                    tree: Some(k),
                    ..self.header.clone()
                },
                stages: self
                    .stages
                    .iter()
                    .map(|r| StageRecord {
                        s: r.s,
                        f: r.f.clone(),
                        moves: r.moves.clone(),
                        dumps: r.dumps.iter().filter(|d| d.k == k).cloned().collect(),
                        enumerations: r
                            .enumerations
                            .iter()
                            .filter(|(key, _)| key_tree(key).is_none_or(|t| t == k))
                            .map(|(a, b)| (a.clone(), b.clone()))
                            .collect(),
                        markers: r.markers.iter().filter(|m| m.k == k).cloned().collect(),
                        parts: r.parts.iter().filter(|p| p.k == k).cloned().collect(),
                        allowed: r.allowed.clone(),
                    })
                    .collect(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths() {
        assert_eq!(path_str(&[]), "λ");
        assert_eq!(path_str(&[0, 3, 1]), "0.3.1");
        assert_eq!(parse_path("0.3.1").unwrap(), vec![0, 3, 1]);
        assert_eq!(parse_path("λ").unwrap(), Vec::<u64>::new());
        assert!(parse_path("0..1").is_err());
    }

    #[test]
    fn left_order() {
        assert!(left_of(&[0, 1], &[1]));
        assert!(left_of(&[2, 0], &[2, 1, 5]));
        assert!(!left_of(&[2], &[2, 1]));
        assert!(!left_of(&[2, 1], &[2]));
        assert!(!left_of(&[3], &[2, 9]));
        assert_eq!(common_prefix(&[1, 2, 3], &[1, 2, 0]), vec![1, 2]);
    }

    #[test]
    fn key_trees() {
        assert_eq!(key_tree("M@1:0.2"), Some(1));
        assert_eq!(key_tree("R@0.2"), None);
        assert_eq!(key_tree("D@0:λ"), Some(0));
    }
}
