//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside a function's domain (nonpositive shape, negative
    /// argument, NaN/inf, probability outside its range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A series, continued fraction, or iteration hit its step limit.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// An intermediate quantity exceeds the floating-point range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Residual moments incompatible with the error-distribution family.
    #[error("out of family: {0}")]
    OutOfFamily(String),

    /// Malformed file or command-line input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An internal consistency check failed; indicates a bug, not bad input.
    #[error("internal consistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
