//! Error type shared by the numerical modules.

use thiserror::Error;

/// Failures of grid, multiplier, norm, trace and boundary-system operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value produced by {0}")]
    NonFinite(String),
    #[error("support margin {declared} below the required {required}")]
    SupportMargin { declared: f64, required: f64 },
    #[error("block index {n} outside [-1, {max}]")]
    BlockOutOfRange { n: i64, max: usize },
    #[error("{requested} blocks requested but the grid admits at most N = {max_admissible}")]
    TooManyBlocks { requested: usize, max_admissible: usize },
    #[error("spectral tail {tail:.3e} exceeds threshold {threshold:.3e} ({context})")]
    SpectralTail { tail: f64, threshold: f64, context: String },
    #[error("invalid generator profile: {0}")]
    InvalidProfile(String),
    #[error("weight rejected: {0}")]
    WeightRejected(String),
    #[error("Hardy inequality hypotheses violated: {0}")]
    HardyRejected(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("boundary system: {0}")]
    BoundarySystem(String),
    #[error("file format: {0}")]
    Format(String),
    #[error("I/O: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, Error>;
