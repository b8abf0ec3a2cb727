//! Crate-wide error type and exit-code mapping.

use thiserror::Error;

/// Errors surfaced by the exact engines, the approximation toolkit and the
/// simulation side. Variants are grouped so the CLI can map them to distinct
/// exit codes (precondition = 2, budget = 3, non-convergence = 4, internal = 5).
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated a documented precondition (bad word text, out-of-range
    /// parameter, mesh too coarse, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A configured resource budget was exceeded. The message names the bound.
    #[error("resource budget exceeded: {0}")]
    Budget(String),

    /// An iterative numerical method failed to converge within its cap.
    #[error("did not converge: {0}")]
    NonConvergence(String),

    /// An internal consistency assertion failed; this signals an implementation
    /// bug, never bad user input.
    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precondition(_) => 2,
            Error::Budget(_) => 3,
            Error::NonConvergence(_) => 4,
            Error::Internal(_) => 5,
            Error::Io(_) | Error::Json(_) => 6,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn budget(msg: impl Into<String>) -> Error {
    Error::Budget(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
