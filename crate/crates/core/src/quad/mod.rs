//! Quadratic forms over GF(q), exact cyclotomic arithmetic and the
//! exponential sums built from them.

pub mod cycint;
pub mod form;
pub mod gfq;
pub mod sums;
