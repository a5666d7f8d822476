//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, stepping and audit operations.
#[derive(Debug, Error)]
pub enum OscintError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error(
        "matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:.3e})"
    )]
    EigenNoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("non-finite state detected at step {step}")]
    NonFiniteState { step: usize },

    #[error("invalid step size {h}: must be positive and finite")]
    InvalidStepSize { h: f64 },

    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),

    #[error("frequency condition violated: {0}")]
    FrequencyCondition(String),

    #[error("workspace inconsistent with configuration: {0}")]
    WorkspaceMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series invariant violated: {0}")]
    SeriesInvariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
