//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (max entrywise deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("positivity violated: minimum eigenvalue {min_eigenvalue:.3e}")]
    PositivityViolation { min_eigenvalue: f64 },

    #[error("invalid trace {trace:.6e}: must satisfy 0 < tr ≤ 1")]
    InvalidTrace { trace: f64 },

    #[error("truncated basis holds only {captured:.12} of the state norm (needs ≥ 1 - 1e-8)")]
    Truncation { captured: f64 },

    #[error(
        "decoherence parameters violate positivity (need α > 0, γ > 0, αγ > β²): \
         α = {alpha:.6e}, β = {beta:.6e}, γ = {gamma:.6e}"
    )]
    PositivityConstraint { alpha: f64, beta: f64, gamma: f64 },

    #[error("integration failed at t = {time:.6e}: {reason}")]
    IntegrationFailure { time: f64, reason: String },

    #[error("trajectory {trajectory} failed at t = {time:.6e}: non-finite state")]
    TrajectoryFailure { trajectory: usize, time: f64 },
}
