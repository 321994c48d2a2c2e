//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the region where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative scheme ran out of budget before reaching its tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// A Fock-space cutoff left more probability mass outside than allowed.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// Malformed request (bad flag, bad grid, unknown subcommand, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
