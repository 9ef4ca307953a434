//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by group construction, parsing and the norm solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A Cayley table failed one of the group axioms.
    #[error("not a group: {0}")]
    InvalidGroup(String),

    /// A subgroup was required to be normal but is not; carries a witness.
    #[error("subgroup is not normal: conjugating {element} by {conjugator} lands outside")]
    NotNormal { conjugator: String, element: String },

    /// Requested ball window exceeds the configured size cap.
    #[error("window of {size} elements exceeds the cap of {cap}")]
    WindowTooLarge { size: usize, cap: usize },

    /// An element could not be reached from the given generators.
    #[error("element {0} is not reachable from the given generators")]
    Unreachable(String),

    /// A matrix expected to be Hermitian deviates too much.
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// Matrix data invalid (non-finite entries, shape mismatch, ...).
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// The SDP solver hit its iteration cap; carries the best bounds so far.
    #[error("solver did not converge: best value {value:.9e}, lower bound {lower_bound:.9e} after {iterations} iterations")]
    SolverDidNotConverge {
        value: f64,
        lower_bound: f64,
        iterations: usize,
    },

    /// A multiplier was malformed for the requested operation.
    #[error("invalid multiplier: {0}")]
    InvalidMultiplier(String),

    /// A cocycle failed validation.
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    /// An action space failed validation.
    #[error("invalid action space: {0}")]
    InvalidAction(String),

    /// push_to_quotient requires exact constancy on cosets.
    #[error("multiplier is not constant on cosets: differs at {0}")]
    NotCosetConstant(String),

    /// Convolution requires a probability density.
    #[error("not a probability density: {0}")]
    NotProbabilityDensity(String),

    /// Compression requires a nonzero projection.
    #[error("not a projection: {0}")]
    NotProjection(String),

    /// Trace weights must define a faithful trace state.
    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    /// cb norms are only exposed for Fourier-multiplier-like maps.
    #[error("cb norm is not supported for map kind {0}; only Fourier multipliers and their sums/tensors reduce to a Schur norm")]
    CbNormUnsupported(String),

    /// File/grammar parse error.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
