use crate::transform::TransformParams;
use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("unknown model '{0}'")]
    UnknownModel(String),

    #[error("unknown strategy '{0}' (available: scale, aniso, rot)")]
    UnknownStrategy(String),

    #[error("problem size {points} exceeds capacity {capacity}")]
    CapacityExceeded { points: usize, capacity: usize },

    #[error("optimization failed: {reason}")]
    OptimizationFailed {
        reason: String,
        best: Option<TransformParams>,
    },

    #[error("eigensolver did not converge: {reason}")]
    NotConverged {
        reason: String,
        ritz_values: Vec<f64>,
        residuals: Vec<f64>,
    },
}

pub type Result<T> = std::result::Result<T, SolverError>;
