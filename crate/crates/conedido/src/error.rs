use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A structural precondition on the input data is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A numerical procedure failed to reach its target accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Malformed input data (files, tables).
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
