//! Error type of the verification harness.

use thiserror::Error;

/// Failures that prevent a suite, a bank or a report from being produced.
///
/// Numerical failures inside a case are *not* errors: they are recorded in
/// the case record and the suite carries on.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown suite `{0}` (known: {known})", known = crate::suites::SUITE_NAMES.join(", "))]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("infeasible bank: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Core(#[from] tracelab_core::Error),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
