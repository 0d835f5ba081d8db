//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by state, operator, and experiment routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must share a shape do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An operator that must be hermitian is not.
    #[error("operator is not hermitian (max deviation {max_deviation:.3e})")]
    NotHermitian { max_deviation: f64 },

    /// An operator that must be unitary is not.
    #[error("operator is not unitary (max deviation {max_deviation:.3e})")]
    NotUnitary { max_deviation: f64 },

    /// A state with zero norm cannot be normalized.
    #[error("state has zero norm")]
    ZeroNorm,

    /// A requested tensor dimension exceeds the configured cap.
    #[error("total dimension {requested} exceeds cap {cap}")]
    Capacity { requested: usize, cap: usize },

    /// A documented precondition of an operation was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An argument was outside its valid range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Norm drift during grid propagation exceeded the abort threshold.
    #[error(
        "norm drift {drift:.3e} exceeded {limit:.3e} at step {step} (dt={dt:.3e}, n_points={n_points})"
    )]
    NormDrift {
        drift: f64,
        limit: f64,
        step: usize,
        dt: f64,
        n_points: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
