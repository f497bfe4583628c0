//! Default numerical tolerances.
//!
//! Every operation that compares floating-point values takes its tolerance from
//! here unless the caller passes one explicitly.

/// Probability vectors and state norms must sum to one within this.
pub const NORMALIZATION: f64 = 1e-12;

/// `|Q_q|` at or below this has no polarity.
pub const POLARITY: f64 = 1e-12;

/// Frobenius residual `‖MᵀM − I‖` accepted as orthogonal.
pub const ORTHOGONALITY: f64 = 1e-10;

/// Residual accepted when a 2×2 block is fitted as a scaled rotation or
/// reflection-rotation.
pub const BLOCK_FIT: f64 = 1e-10;

/// Frobenius residual `‖V†V − I‖` accepted as unitary.
pub const UNITARITY: f64 = 1e-10;

/// Maximum result-probability deviation tolerated by the gauge witness.
pub const WITNESS: f64 = 1e-9;

/// Distance from `{0, 1}` at which the `F` solver treats the solution as sitting
/// on a turning point.
pub const TURNING_POINT: f64 = 1e-10;

/// Orthonormality of measurement bases, `|⟨v_i, v_j⟩ − δ_ij|`.
pub const ORTHONORMALITY: f64 = 1e-10;
