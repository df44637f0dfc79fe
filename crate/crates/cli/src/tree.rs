use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use ce_core::hierarchy::{t_pi2, t_pi3, t_sigma3};
use ce_core::tree::{
    canonical_form, descending_sequence_tree, finite_tree_rank, i_transform, kleene_brouwer,
    longest_descending_chain, tree_isomorphic, FiniteTree, LinearOrderSpec, TreeSpec,
};
use clap::{Subcommand, ValueEnum};
use serde_json::json;

use crate::{read, Output};

#[derive(Subcommand)]
pub enum TreeCmd {
    /// Write a named tree, truncated at (depth, width), as JSON.
    Build {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        width: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Kleene–Brouwer order of a tree, with a longest descending chain.
    Kb {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 16)]
        width: u64,
        #[command(flatten)]
        out: Output,
    },
    /// First elements of the order I(T): ω copies of the KB order of the
    /// transformed tree.
    Itransform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        width: u64,
        /// How many carrier elements to list.
        #[arg(long, default_value_t = 32)]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Tree of descending sequences of a tree's KB order.
    Desc {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Whether two trees are isomorphic, with their canonical forms.
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Rank of a finite tree.
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Keep the nodes of length at most `depth` with entries below `width`.
    Truncate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        width: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    /// λ ⊂ ⟨0⟩ ⊂ … of length `depth`.
    Chain,
    /// λ with `width` leaves.
    Star,
    /// All sequences below `width`.
    Full,
    Pi2,
    Pi3,
    Sigma3,
}

fn load(path: &Path) -> Result<FiniteTree> {
    Ok(FiniteTree::from_json(&read(path)?)?)
}

fn order_json(order: &LinearOrderSpec, n: usize) -> serde_json::Value {
    let sorted = order.sorted(n);
    let chain = longest_descending_chain(order, &sorted);
    json!({
        "size": order.size(),
        "increasing": sorted,
        "increasing_text": sorted.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "longest_descending": chain,
    })
}

pub fn run(cmd: TreeCmd) -> Result<()> {
    match cmd {
        TreeCmd::Build {
            kind,
            depth,
            width,
            out,
        } => {
            if width == 0 {
                bail!("width must be positive");
            }
            let t = match kind {
                Kind::Chain => FiniteTree::chain(depth),
                Kind::Star => FiniteTree::star(width),
                Kind::Full => TreeSpec::full().truncate(depth, width),
                Kind::Pi2 => t_pi2().truncate(depth, width),
                Kind::Pi3 => t_pi3().truncate(depth, width),
                Kind::Sigma3 => t_sigma3().truncate(depth, width),
            };
            out.emit(&t.to_json())
        }
        TreeCmd::Kb {
            input,
            depth,
            width,
            out,
        } => {
            let t = load(&input)?;
            let kb = kleene_brouwer(&t.to_spec(), depth, width);
            let n = kb.size().unwrap_or(0);
            out.emit(&serde_json::to_string_pretty(&order_json(&kb, n))?)
        }
        TreeCmd::Itransform {
            input,
            depth,
            width,
            count,
            out,
        } => {
            let t = load(&input)?;
            let l = i_transform(&t.to_spec(), None, depth, width);
            out.emit(&serde_json::to_string_pretty(&order_json(&l, count))?)
        }
        TreeCmd::Desc { input, depth, out } => {
            let t = load(&input)?;
            let kb = kleene_brouwer(&t.to_spec(), usize::MAX, u64::MAX);
            let width = kb.size().unwrap_or(0) as u64;
            let d = descending_sequence_tree(&kb).truncate(depth, width);
            out.emit(&d.to_json())
        }
        TreeCmd::Iso { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            println!("{}", tree_isomorphic(&a, &b));
            println!("{}", canonical_form(&a));
            println!("{}", canonical_form(&b));
            Ok(())
        }
        TreeCmd::Rank { input } => {
            println!("{}", finite_tree_rank(&load(&input)?)?);
            Ok(())
        }
        TreeCmd::Truncate {
            input,
            depth,
            width,
            out,
        } => out.emit(&load(&input)?.truncate(depth, width).to_json()),
    }
}
