//! Norm computations for completely bounded Schur multipliers on finite
//! groups, Cayley-ball windows of free groups and integer lattices, and
//! finite-dimensional traced algebras.
//!
//! The crate is organized around five layers:
//!
//! * [`group`] / [`window`] — exact finite group arithmetic and finite
//!   windows of infinite discrete groups; these supply the index sets on
//!   which every multiplier matrix is built.
//! * [`linalg`] — dense complex matrices, a Hermitian eigensolver and the
//!   PSD-cone projection used throughout.
//! * [`schur`] / [`sdp`] — the numerical heart: the completely bounded
//!   Schur norm of a complex matrix via its block-PSD factorization
//!   characterization, with a primal factorization and a certified dual
//!   lower bound.
//! * [`multiplier`] / [`transforms`] — B2 (Herz-Schur), Fourier-algebra
//!   and predual norms for functions on groups, plus every constructive
//!   multiplier transform (restriction, extension, products, quotients,
//!   averaging, convolution, cocycle induction, Folner averaging,
//!   semigroups of the form exp(-t*psi), window cutoffs).
//! * [`vn`] — finite-dimensional traced von Neumann algebras (multi-matrix
//!   algebras), group algebras, Fourier multiplier operators and their
//!   L2 extensions, conditional expectations, corners, sums, tensors and
//!   trace changes.
//!
//! [`oracle`] holds slow, independent reference implementations (brute
//! force factorization searches) used to cross-check the solvers; they are
//! deliberately kept free of any code shared with the fast paths.

pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod multiplier;
pub mod oracle;
pub mod schur;
pub mod sdp;
pub mod transforms;
pub mod vn;
pub mod window;

pub use error::Error;
pub use group::FiniteGroup;
pub use linalg::ComplexMatrix;
pub use multiplier::Multiplier;
pub use schur::{schur_norm, SchurNormResult};

/// Default solver tolerance used when callers do not specify one.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Result alias for the crate error type.
pub type Result<T> = std::result::Result<T, Error>;
