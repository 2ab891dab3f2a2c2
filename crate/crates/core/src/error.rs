//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),

    #[error("norm form mismatch")]
    NormFormMismatch,

    #[error("metadata mismatch: {0}")]
    MetaMismatch(String),

    /// Division had a nonzero remainder. Distinct from invalid input: the
    /// relation solver probes divisibility and must be able to observe this.
    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("division by zero")]
    DivisionByZero,

    /// A coefficient past the truncation bound was requested. Never a silent
    /// zero: reading past the bound is the dominant bug class in q-expansion
    /// code.
    #[error("precision violation: q-exponent {requested}/24 requested, truncation bound is {trunc}/24")]
    PrecisionViolation { requested: i64, trunc: i64 },

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("missing form metadata: {0}")]
    MissingMeta(&'static str),

    #[error("exponent vector is not half-integral after substitution")]
    NonHalfIntegralExponent,

    #[error("matrix is not invertible")]
    SingularMatrix,

    #[error("norm form does not stay diagonal under this substitution")]
    NonDiagonalNorm,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
