use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} unsupported for {system}: {reason}")]
    UnsupportedIndex {
        system: String,
        index: usize,
        reason: String,
    },

    #[error("quadrature did not converge; worst entry change {worst:e} at ({row}, {col})")]
    QuadratureNotConverged { worst: f64, row: usize, col: usize },

    #[error("ill-posed section: sigma_min = {sigma_min:e}; {advice}")]
    IllPosedSection { sigma_min: f64, advice: String },

    #[error("singular system matrix (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("no N up to {bound} reaches the target; last D = {last_d:e}")]
    BoundExhausted { bound: usize, last_d: f64 },

    #[error("infeasible: residual outside range {residual:e} exceeds delta {delta:e}")]
    Infeasible { residual: f64, delta: f64 },

    #[error("refused: {0}")]
    Refused(String),

    #[error("truncation cap {cap} exceeded without stagnation")]
    TruncationCap { cap: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
