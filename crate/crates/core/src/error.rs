use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by the physics and numerics layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A series evaluation ran out of its iteration budget before reaching
    /// the requested accuracy, or the achievable accuracy estimate missed
    /// the target. Returning a degraded value silently is never an option.
    #[error("series did not converge: {terms} terms, best relative error ~{best_rel:e}")]
    NonConvergence { terms: usize, best_rel: f64 },

    /// Adaptive quadrature could not certify the requested tolerance. The
    /// best estimate and its error bound are carried for diagnostics.
    #[error("quadrature tolerance not met: estimate {value}, error bound {error_estimate:e} after {evaluations} evaluations")]
    ToleranceNotMet {
        value: Complex64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("point lies outside the causal diamond")]
    OutsideDiamond,

    #[error("same-direction detector overlap {overlap:e} exceeds the gate {gate:e}")]
    DetectorOverlapTooLarge { overlap: f64, gate: f64 },

    /// sigma + i*Omega has an eigenvalue below -tolerance; the state cannot
    /// come from a valid quantum state and usually signals an upstream
    /// quadrature failure.
    #[error("covariance matrix is not physical: min eig(sigma + i Omega) = {min_eig:e}")]
    NonPhysical { min_eig: f64 },

    #[error("optimizer restarts disagree: best {best:e} vs runner-up {runner_up:e}, allowed gap {allowed:e}")]
    OptimizationFailed {
        best: f64,
        runner_up: f64,
        allowed: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
