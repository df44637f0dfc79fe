//! Effective constructions on c.e. sets, trees and linear orders, run at
//! finite stage bounds and audited stage by stage.

pub mod audit;
pub mod effective;
pub mod error;
pub mod hierarchy;
pub mod priority;
pub mod tree;

pub use error::{Error, Result};
