//! Composite systems.
//!
//! A pair of systems with `N` and `N'` results is a system with `N·N'` results
//! `l = N'·i + j` (0-based). Probabilities multiply and the dimensionless
//! phases `χ` add, which in complex form is the Kronecker product.

use alloc::vec::Vec;

use crate::dynamics::{evolve_stationary, StationaryEvolution};
use crate::linalg::{angle_distance, kron_vec};
use crate::measurement::{MeasurementBasis, Observable};
use crate::qspace::{PhaseRep, PureState};
use crate::simplex::ProbVec;
use crate::{Error, Result};

/// The bijection `(i, j) ↔ l = N'·i + j` between result pairs and composite
/// results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositeIndex {
    n1: usize,
    n2: usize,
}

impl CompositeIndex {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::Empty);
        }
        Ok(Self { n1, n2 })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// `N'' = N·N'`.
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// # Panics
    /// If `i` or `j` is out of range.
    pub fn combine(&self, i: usize, j: usize) -> usize {
        assert!(i < self.n1 && j < self.n2, "result index out of range");
        self.n2 * i + j
    }

    /// # Panics
    /// If `l` is out of range.
    pub fn split(&self, l: usize) -> (usize, usize) {
        assert!(l < self.len(), "composite index out of range");
        (l / self.n2, l % self.n2)
    }
}

/// `p''_l = p_i p'_j`, `χ''_l = χ_i + χ'_j`.
///
/// Composite entries with zero probability carry no phase. Both factors must
/// share the same phase constants, since `χ` is only comparable under one
/// `(a, b)`; with `b = 0` the rule reads `φ''_l = φ_i + φ'_j`.
pub fn compose_phase_reps(s1: &PhaseRep, s2: &PhaseRep) -> Result<PhaseRep> {
    let constants = s1.constants();
    if constants != s2.constants() {
        return Err(Error::InvalidArgument("phase constants of the factors differ"));
    }
    let index = CompositeIndex::new(s1.n(), s2.n())?;
    let mut p = Vec::with_capacity(index.len());
    let mut phi = Vec::with_capacity(index.len());
    for l in 0..index.len() {
        let (i, j) = index.split(l);
        let pl = s1.probs().as_slice()[i] * s2.probs().as_slice()[j];
        p.push(pl);
        phi.push(match (s1.chi(i), s2.chi(j)) {
            (Some(x), Some(y)) if pl > 0.0 => Some(constants.phi(x + y)),
            _ => None,
        });
    }
    // Products of normalised vectors sum to 1 up to rounding.
    let p = ProbVec::with_tolerance(p, 1e-10)?;
    let phi = phi.into_iter().zip(p.as_slice()).map(|(x, &pl)| if pl > 0.0 { x } else { None }).collect();
    PhaseRep::new(p, phi, constants)
}

/// `v''_l = v_i v'_j`.
pub fn tensor(v1: &PureState, v2: &PureState) -> PureState {
    PureState::from_trusted(kron_vec(v1.as_slice(), v2.as_slice()))
}

/// `v⁽¹⁾ ⊗ … ⊗ v⁽ᵈ⁾`, associated to the left.
pub fn fold(vs: &[PureState]) -> Result<PureState> {
    let (first, rest) = vs.split_first().ok_or(Error::Empty)?;
    Ok(rest.iter().fold(first.clone(), |acc, v| tensor(&acc, v)))
}

/// Which factor of a pair an observable acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    First,
    Second,
}

/// `A ⊗ I` or `I ⊗ A` on a pair whose other factor has `other_n` results.
///
/// The result is degenerate whenever `other_n > 1`: each value of `A` appears
/// `other_n` times.
pub fn subsystem_observable(obs: &Observable, other_n: usize, position: Position) -> Result<Observable> {
    let dims = match position {
        Position::First => [obs.n(), other_n],
        Position::Second => [other_n, obs.n()],
    };
    let k = match position {
        Position::First => 0,
        Position::Second => 1,
    };
    embed_observable(obs, &dims, k)
}

/// `I ⊗ … ⊗ A ⊗ … ⊗ I` with `A` at factor `k` of a system with factor
/// dimensions `dims`. The basis is the product of the standard bases with the
/// basis of `A` at position `k`.
pub fn embed_observable(obs: &Observable, dims: &[usize], k: usize) -> Result<Observable> {
    if k >= dims.len() {
        return Err(Error::OutOfRange { index: k, value: dims.len() as f64 });
    }
    if dims[k] != obs.n() {
        return Err(Error::DimensionMismatch { expected: dims[k], found: obs.n() });
    }
    if dims.contains(&0) {
        return Err(Error::Empty);
    }
    let total: usize = dims.iter().product();
    let mut vectors = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    for l in 0..total {
        let digits = mixed_radix_digits(l, dims);
        let factors = digits
            .iter()
            .enumerate()
            .map(|(f, &d)| if f == k { Ok(obs.basis().vectors()[d].clone()) } else { PureState::basis(dims[f], d) })
            .collect::<Result<Vec<_>>>()?;
        vectors.push(fold(&factors)?);
        values.push(obs.values()[digits[k]]);
    }
    Observable::new(MeasurementBasis::new(vectors)?, values)
}

/// Digits of `l` with the first factor most significant.
fn mixed_radix_digits(mut l: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = alloc::vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = l % d;
        l /= d;
    }
    digits
}

/// Evolves each factor with its own energy and composes, then composes and
/// evolves with `E1 + E2`; returns the largest phase discrepancy mod `2π`.
/// Both routes use the phase constants of the first factor.
pub fn energy_additivity_check(
    s1: &PhaseRep,
    s2: &PhaseRep,
    e1: f64,
    e2: f64,
    dt: f64,
    alpha: f64,
) -> Result<f64> {
    let a = s1.constants().a;
    let ev = |e: f64| StationaryEvolution::new(e, alpha, a);
    let separate = compose_phase_reps(
        &evolve_stationary(s1, &ev(e1)?, dt),
        &evolve_stationary(s2, &ev(e2)?, dt),
    )?;
    let joint = evolve_stationary(&compose_phase_reps(s1, s2)?, &ev(e1 + e2)?, dt);
    Ok(separate
        .phases()
        .iter()
        .zip(joint.phases())
        .map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) => angle_distance(*x, *y),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max))
}
