//! Shared error type for the crate.

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A sequence that must be ordered is not.
    #[error("ordering error: {0}")]
    Unordered(String),

    /// Correlation is undefined because one input has zero variance.
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    /// Test statistic is undefined (zero-variance, zero-mean differences).
    #[error("degenerate test: {0}")]
    DegenerateTest(String),

    /// Structurally invalid input (mismatched lengths, missing fields, ...).
    #[error("input error: {0}")]
    Input(String),

    /// An aggregation was requested over zero workers.
    #[error("empty crowd: no workers to aggregate")]
    EmptyCrowd,

    /// ROC curve is undefined (a required outcome class is absent).
    #[error("undefined ROC: {0}")]
    UndefinedRoc(String),

    /// Invalid configuration value.
    #[error("config error: {0}")]
    Config(String),

    /// Malformed row in a trials file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Inconsistent data across rows (duplicates, conflicting answer keys).
    #[error("integrity error: {0}")]
    Integrity(String),

    /// An internal consistency check failed.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// Underlying I/O failure.
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
