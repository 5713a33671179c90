//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, DrhError>;

#[derive(Debug, Error)]
pub enum DrhError {
    /// A size or limit parameter is outside the supported range.
    #[error("capacity: {0}")]
    Capacity(String),

    /// A query point lies outside the data that was computed.
    #[error("range: {0}")]
    Range(String),

    /// A mathematical domain violation (e.g. Li(x) for x <= 1).
    #[error("domain: {0}")]
    Domain(String),

    /// An argument violates an operation's precondition.
    #[error("argument: {0}")]
    Argument(String),

    /// Requested accuracy is unattainable with the configured depth.
    #[error("precision: {0}")]
    Precision(String),

    /// Computed data contradicts a theorem-backed invariant; signals a bug
    /// in an input table rather than a user error.
    #[error("integrity: {0}")]
    Integrity(String),

    /// Inputs are mutually inconsistent (e.g. a vanishing target with r = 0).
    #[error("inconsistency: {0}")]
    Inconsistency(String),

    /// A local Euler factor vanished at the evaluation point.
    #[error("singularity: {0}")]
    Singularity(String),

    /// A least-squares fit has a degenerate design matrix.
    #[error("fit: {0}")]
    Fit(String),

    /// Integer convolution would exceed exact-reconstruction capacity.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Cache file is corrupt, truncated, or has a bad magic/checksum.
    #[error("cache: {0}")]
    Cache(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
