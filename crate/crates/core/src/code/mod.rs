//! The cyclic codes: parameter validation, weight distributions and the dual distance.

pub mod dual;
mod spec;
pub mod weights;

pub use spec::{validate, validate_brute_force, CodeSpec, Regime};
