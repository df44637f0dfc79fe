//! Tree families for the finite levels of the arithmetic hierarchy and the
//! reductions into them.

mod expansion;
mod families;
mod reduction;
mod witness;

pub use expansion::{expansion_length, reduction_trace, t2_a, t_pi2, ReductionTrace};
pub use families::{
    growing_level1, height2_signature, pi3_address, t_pi3, t_pin, t_sigma3, t_sigman,
};
pub use reduction::{designated_address, t3_a, tn_a, NormalForm};
pub use witness::{one_witness_machine, Marker, MarkerMachine};
