use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown builtin '{0}'")]
    UnknownBuiltin(String),

    #[error("path is not closed")]
    NonClosedPath,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("non-periodic realization: {0}")]
    NonPeriodic(String),

    #[error("singular lattice basis")]
    SingularBasis,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("wrong source block: {0}")]
    WrongBlock(String),

    #[error("no ring of length <= {cap} found")]
    GirthNotFound { cap: usize },

    #[error(
        "no convergence after {iterations} iterations \
         (harmonic residual {harmonic_residual:e}, frame residual {frame_residual:e})"
    )]
    NotConverged { iterations: usize, harmonic_residual: f64, frame_residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
