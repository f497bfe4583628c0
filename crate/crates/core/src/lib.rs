//! # igq-core
//!
//! Finite-dimensional quantum theory rebuilt from information geometry, as a
//! numerical library.
//!
//! The pipeline runs in the same order as the modules:
//!
//! - [`simplex`]: discrete distributions, the information metric
//!   `ds² = ¼ Σ dp²/p` and the coin-discrimination log Bayes factor it comes from.
//! - [`qspace`]: states as unit vectors of signed square-roots of `2N` outcome
//!   probabilities, their `(p_i; φ_i)` phase form and the complex form
//!   `v_i = √p_i e^{iφ_i}`.
//! - [`measure_solver`]: numerical evidence that translation invariance of the
//!   induced measure forces `F(χ) = cos²(aχ + b)`.
//! - [`classify`]: which `2N × 2N` orthogonal maps respect global gauge
//!   invariance, and their factorisation into unitary or antiunitary maps.
//! - [`measurement`]: Born-rule probabilities, the `U`–`A`–`V` simulation
//!   arrangement, observables and degenerate measurements.
//! - [`composite`]: product states, subsystem observables, energy additivity.
//! - [`dynamics`]: stationary evolution and discretised Hamilton–Jacobi residuals.
//! - [`sampling`]: the uniform measure over states, Haar matrices and the
//!   invariance checks of the flat metric `ds² = |dv|²`.
//!
//! The crate is `no_std` (it needs `alloc`). The default `std` feature adds the
//! statistical tests that need special functions.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x < tol)` also rejects NaN.

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod classify;
pub mod composite;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod measure_solver;
pub mod measurement;
pub mod qspace;
pub mod sampling;
pub mod simplex;
#[cfg(feature = "std")]
pub mod stats;
pub mod tol;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use classify::{GaugeMap, OrthogonalMap, Violation};
pub use measurement::{MeasurementBasis, Observable};
pub use qspace::{PhaseConstants, PhaseRep, PureState, QVector};
pub use simplex::{ProbVec, TangentVec};
