//! Q-space states and their phase and complex forms.
//!
//! A measurement with `N` results coarse-grains `2N` outcomes. A state is a
//! unit vector `Q ∈ S^{2N−1}` with outcome probabilities `P_q = Q_q²`; result
//! `i` (0-based here) covers outcomes `2i` and `2i + 1`. Writing each pair as
//! `√p_i (cos φ_i, sin φ_i)` gives the phase form, and packing each pair into a
//! complex number gives `v_i = √p_i e^{iφ_i}`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::linalg::{norm_sqr, wrap_angle};
use crate::simplex::ProbVec;
use crate::{tol, Error, Result};

/// Unit vector in `2N`-dimensional real space.
#[derive(Debug, Clone, PartialEq)]
pub struct QVector {
    q: Vec<f64>,
}

impl QVector {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::Empty);
        }
        if !q.len().is_multiple_of(2) {
            return Err(Error::OddLength(q.len()));
        }
        for (index, &value) in q.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value.abs() > 1.0 {
                return Err(Error::OutOfRange { index, value });
            }
        }
        let sum: f64 = q.iter().map(|x| x * x).sum();
        if (sum - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { q })
    }

    /// Scales a nonzero vector onto the sphere.
    pub fn normalized(q: Vec<f64>) -> Result<Self> {
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized { sum: norm * norm });
        }
        Self::new(q.into_iter().map(|x| x / norm).collect())
    }

    /// Number of results `N` (half the real dimension).
    pub fn n(&self) -> usize {
        self.q.len() / 2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.q
    }

    /// `P_q = Q_q²`, length `2N`.
    pub fn outcome_probs(&self) -> ProbVec {
        ProbVec::from_trusted(self.q.iter().map(|x| x * x).collect())
    }

    pub fn negated(&self) -> Self {
        Self { q: self.q.iter().map(|x| -x).collect() }
    }
}

/// The affine map `φ = a·χ + b` between the dimensionless phase `χ` and the
/// angle `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConstants {
    pub a: f64,
    pub b: f64,
}

impl Default for PhaseConstants {
    fn default() -> Self {
        Self { a: 1.0, b: 0.0 }
    }
}

impl PhaseConstants {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(Error::ZeroPhaseScale);
        }
        Ok(Self { a, b })
    }

    pub fn phi(&self, chi: f64) -> f64 {
        self.a * chi + self.b
    }

    pub fn chi(&self, phi: f64) -> f64 {
        (phi - self.b) / self.a
    }
}

/// `(p_i; φ_i)` with `φ_i` absent wherever `p_i = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRep {
    p: ProbVec,
    phi: Vec<Option<f64>>,
    constants: PhaseConstants,
}

impl PhaseRep {
    /// Phases are stored reduced to `[0, 2π)`.
    pub fn new(p: ProbVec, phi: Vec<Option<f64>>, constants: PhaseConstants) -> Result<Self> {
        if phi.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: p.len(), found: phi.len() });
        }
        PhaseConstants::new(constants.a, constants.b)?;
        let mut reduced = Vec::with_capacity(phi.len());
        for (index, (&pi, phase)) in p.as_slice().iter().zip(phi).enumerate() {
            match (pi > 0.0, phase) {
                (true, Some(x)) if x.is_finite() => reduced.push(Some(wrap_angle(x))),
                (true, Some(_)) => return Err(Error::NonFinite { index }),
                (false, None) => reduced.push(None),
                _ => return Err(Error::PhaseSupport { index }),
            }
        }
        Ok(Self { p, phi: reduced, constants })
    }

    /// Builds from `(p_i; χ_i)`; `χ_i` is ignored where `p_i = 0`.
    pub fn from_chi(p: ProbVec, chi: &[f64], constants: PhaseConstants) -> Result<Self> {
        if chi.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: p.len(), found: chi.len() });
        }
        let phi = p
            .as_slice()
            .iter()
            .zip(chi)
            .map(|(&pi, &c)| (pi > 0.0).then(|| constants.phi(c)))
            .collect();
        Self::new(p, phi, constants)
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn probs(&self) -> &ProbVec {
        &self.p
    }

    pub fn phases(&self) -> &[Option<f64>] {
        &self.phi
    }

    pub fn constants(&self) -> PhaseConstants {
        self.constants
    }

    /// `χ_i = (φ_i − b)/a` for the stored (reduced) phase.
    pub fn chi(&self, i: usize) -> Option<f64> {
        self.phi[i].map(|phi| self.constants.chi(phi))
    }

    /// Every present phase moved by `delta`.
    pub(crate) fn shifted(&self, delta: f64) -> Self {
        let phi = self.phi.iter().map(|x| x.map(|x| wrap_angle(x + delta))).collect();
        Self { p: self.p.clone(), phi, constants: self.constants }
    }

    /// `(q_{a|i}, q_{b|i}) = (cos φ_i, sin φ_i)`, absent with the phase.
    pub fn direction(&self, i: usize) -> Option<(f64, f64)> {
        self.phi[i].map(|phi| (phi.cos(), phi.sin()))
    }
}

/// `v ∈ ℂ^N` with `Σ|v_i|² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    v: Vec<Complex64>,
}

impl PureState {
    pub fn new(v: Vec<Complex64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = v.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let sum = norm_sqr(&v);
        if (sum - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { v })
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(v: Vec<Complex64>) -> Result<Self> {
        let norm = norm_sqr(&v).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized { sum: norm * norm });
        }
        Self::new(v.into_iter().map(|z| z / norm).collect())
    }

    /// The standard basis state `e_j` of dimension `n`.
    pub fn basis(n: usize, j: usize) -> Result<Self> {
        if j >= n {
            return Err(Error::InvalidArgument("basis index out of range"));
        }
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); n];
        v[j] = Complex64::new(1.0, 0.0);
        Ok(Self { v })
    }

    /// Wraps a vector whose norm the caller has already established.
    pub(crate) fn from_trusted(v: Vec<Complex64>) -> Self {
        debug_assert!((norm_sqr(&v) - 1.0).abs() < 1e-9);
        Self { v }
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.v
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.v
    }

    /// `|v_i|²`.
    pub fn probs(&self) -> ProbVec {
        ProbVec::from_trusted(self.v.iter().map(|z| z.norm_sqr()).collect())
    }

    pub fn conj(&self) -> Self {
        Self { v: self.v.iter().map(|z| z.conj()).collect() }
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.v.iter().zip(&other.v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other` after removing the best global
    /// phase, i.e. `min_θ max_i |v_i − e^{iθ} w_i|` with `θ = arg⟨w, v⟩`.
    pub fn distance_mod_phase(&self, other: &Self) -> f64 {
        let overlap = crate::linalg::inner(&other.v, &self.v);
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
        self.v.iter().zip(&other.v).map(|(a, b)| (a - b * phase).norm()).fold(0.0, f64::max)
    }
}

/// `Q = (√p_1 cos φ_1, √p_1 sin φ_1, …)`, with `(0, 0)` for absent phases.
pub fn from_phase_rep(rep: &PhaseRep) -> QVector {
    let mut q = Vec::with_capacity(2 * rep.n());
    for (i, &pi) in rep.probs().as_slice().iter().enumerate() {
        let (c, s) = rep.direction(i).unwrap_or((0.0, 0.0));
        let r = pi.sqrt();
        q.push(r * c);
        q.push(r * s);
    }
    QVector { q }
}

/// Inverse of [`from_phase_rep`] with the default constants `a = 1, b = 0`.
pub fn to_phase_rep(q: &QVector) -> PhaseRep {
    to_phase_rep_with(q, PhaseConstants::default())
}

pub fn to_phase_rep_with(q: &QVector, constants: PhaseConstants) -> PhaseRep {
    let pairs = q.as_slice().chunks_exact(2);
    let p: Vec<f64> = pairs.clone().map(|c| c[0] * c[0] + c[1] * c[1]).collect();
    let phi = pairs
        .zip(&p)
        .map(|(c, &pi)| (pi > 0.0).then(|| wrap_angle(c[1].atan2(c[0]))))
        .collect();
    PhaseRep { p: ProbVec::from_trusted(p), phi, constants }
}

/// `p_i = P_{2i} + P_{2i+1}`.
pub fn result_probs(q: &QVector) -> ProbVec {
    ProbVec::from_trusted(q.as_slice().chunks_exact(2).map(|c| c[0] * c[0] + c[1] * c[1]).collect())
}

/// Sign of an outcome amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flipped(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// `σ_q = sign(Q_q)`, absent where `|Q_q| ≤` [`tol::POLARITY`].
pub fn polarities(q: &QVector) -> Vec<Option<Polarity>> {
    q.as_slice()
        .iter()
        .map(|&x| {
            if x > tol::POLARITY {
                Some(Polarity::Positive)
            } else if x < -tol::POLARITY {
                Some(Polarity::Negative)
            } else {
                None
            }
        })
        .collect()
}

/// `e^{iφ0} v`.
pub fn gauge_shift(state: &PureState, phi0: f64) -> PureState {
    let phase = Complex64::from_polar(1.0, phi0);
    PureState { v: state.as_slice().iter().map(|z| z * phase).collect() }
}

/// `v_i = Q_{2i} + i Q_{2i+1}`.
pub fn to_complex(q: &QVector) -> PureState {
    PureState { v: q.as_slice().chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect() }
}

pub fn from_complex(v: &PureState) -> QVector {
    QVector { q: v.as_slice().iter().flat_map(|z| [z.re, z.im]).collect() }
}
