//! Stage-indexed presentations of c.e. sets and the predicate language that
//! drives them.

mod algebra;
mod enumerator;
mod predicate;

pub use algebra::{snapshot_algebra, SnapshotAlgebra};
pub use enumerator::{EnumSource, Enumerator, EnumeratorTable};
pub use predicate::{parse_predicate, CmpOp, Formula, PredicateSpec, Quantifier, Term};
