//! Finite-stage simulation of the priority construction: a tree of
//! strategies, balls moving through it, the stores built at each node and
//! the JSONL trace of every stage.

mod config;
mod engine;
mod estate;
mod listing;
mod maximal;
mod split;
mod trace;

pub use config::{check_split, EnumeratorConfig, HemiInputs, Mode, RunConfig};
pub use engine::{dump_target_depths, Engine, NodeView};
pub use estate::{ekl_argmax, estate_of, untriple, StoreStats};
pub use listing::{make_listing, rank, Listing};
pub use maximal::{estate_bits, estate_string, MaximalSet, Pull};
pub use split::{part_layout, Dest, Rotation};
pub use trace::{
    common_prefix, key_tree, left_of, parse_path, path_str, Dump, DumpTarget, Header,
    MarkerRecord, Move, MoveKind, PartRecord, Path, Side, StageRecord, Trace,
};
