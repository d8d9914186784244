//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or vector shapes are incompatible with the requested operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A scalar argument is outside the operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeds a documented desk-scale resource cap.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// An input value fails a structural validity check (non-unitary member,
    /// non-normalized weights, invalid Kraus set, malformed state, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// An iterative numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Underlying file-system failure while reading or writing artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A matrix file, manifest, or report could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
