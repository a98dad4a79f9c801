//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An argument was outside the documented domain of the operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative solver failed to reach its tolerance.
    #[error("{context}: no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        /// Which solver failed.
        context: String,
        /// Iterations performed before giving up.
        iterations: usize,
        /// Final residual norm.
        residual: f64,
    },

    /// A point was outside the domain covered by a computed solution.
    #[error("evaluation point {point} outside domain [{lo}, {hi}]")]
    OutOfDomain {
        /// Requested point.
        point: f64,
        /// Domain lower end.
        lo: f64,
        /// Domain upper end.
        hi: f64,
    },

    /// A linear system was numerically singular.
    #[error("singular linear system in {0}")]
    SingularSystem(String),

    /// The precision ladder was exhausted without meeting the target.
    #[error("precision ladder exhausted in {context}: orthogonality defect {defect:.3e}")]
    PrecisionExhausted {
        /// Which computation failed.
        context: String,
        /// Achieved orthogonality defect.
        defect: f64,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
