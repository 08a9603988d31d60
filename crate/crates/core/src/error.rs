use std::fmt;

use thiserror::Error;

/// Which parameter precondition was violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamViolation {
    /// `p` must be an odd prime.
    NotOddPrime { p: u64 },
    /// Degrees must be positive.
    ZeroDegree,
    /// The subfield degree must divide the extension degree.
    SubfieldNotDivisor { m: u32, e: u32 },
    /// `s = m/e` must be odd.
    EvenRelativeDegree { s: u32 },
    /// `s = m/e` must be at least 3.
    RelativeDegreeTooSmall { s: u32 },
    /// `p^m` exceeds the table-backed field size limit.
    FieldTooLarge { p: u64, m: u32, limit: u64 },
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotOddPrime { p } => write!(f, "p = {p} is not an odd prime"),
            Self::ZeroDegree => write!(f, "degrees must be positive"),
            Self::SubfieldNotDivisor { m, e } => write!(f, "e = {e} does not divide m = {m}"),
            Self::EvenRelativeDegree { s } => write!(f, "s = m/e = {s} is even"),
            Self::RelativeDegreeTooSmall { s } => write!(f, "s = m/e = {s} is smaller than 3"),
            Self::FieldTooLarge { p, m, limit } => {
                write!(f, "field size {p}^{m} exceeds the supported limit {limit}")
            }
        }
    }
}

impl ParamViolation {
    /// Stable machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::NotOddPrime { .. } => "p_not_odd_prime",
            Self::ZeroDegree => "zero_degree",
            Self::SubfieldNotDivisor { .. } => "e_not_divisor",
            Self::EvenRelativeDegree { .. } => "s_even",
            Self::RelativeDegreeTooSmall { .. } => "s_too_small",
            Self::FieldTooLarge { .. } => "field_too_large",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(ParamViolation),

    #[error("unsupported regime: k/e = {k_over_e} is even and e = {e} is even")]
    UnsupportedRegime { k_over_e: u32, e: u32 },

    #[error("operation requires regime {expected} but the code is in regime {actual}")]
    RegimeError {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("exponential sum did not reduce to a rational integer: {0}")]
    NonIntegerSum(String),

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("budget exceeded: {what} needs {needed} units, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },

    #[error(
        "no weight-{weight} dual codeword found although the sphere-packing bound guarantees one"
    )]
    WitnessNotFound { weight: u32 },
}

impl Error {
    /// Stable machine-readable kind, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::InvalidParams(_) => "InvalidParams",
            Self::UnsupportedRegime { .. } => "UnsupportedRegime",
            Self::RegimeError { .. } => "RegimeError",
            Self::DomainError(_) => "DomainError",
            Self::NonIntegerSum(_) => "NonIntegerSum",
            Self::OracleMismatch(_) => "OracleMismatch",
            Self::InternalInconsistency(_) => "InternalInconsistency",
            Self::BudgetExceeded { .. } => "BudgetExceeded",
            Self::WitnessNotFound { .. } => "WitnessNotFound",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
