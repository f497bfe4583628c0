//! Measurements: Born probabilities, the simulation arrangement, observables
//! and degenerate groupings.
//!
//! Every measurement `A'` has an orthonormal basis `{v'_i}` of states that give
//! result `i` with certainty. It can be simulated by the reference measurement
//! `A` (whose basis states are the standard basis `e_i`) sandwiched between two
//! unitaries: `U v'_i = e^{iϑ_i} e_i` before, `V e_i = e^{iϑ'_i} v'_i` after.
//! Result `i` then occurs with probability `|⟨v'_i, v⟩|²`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{inner, ComplexMatrix};
use crate::qspace::PureState;
use crate::simplex::{sample_index, ProbVec};
use crate::{tol, Error, Result};

/// An orthonormal basis `v'_1 … v'_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    vectors: Vec<PureState>,
}

impl MeasurementBasis {
    /// Checks `|⟨v'_i, v'_j⟩ − δ_ij| <` [`tol::ORTHONORMALITY`].
    pub fn new(vectors: Vec<PureState>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if let Some(bad) = vectors.iter().find(|v| v.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.n() });
        }
        let mut worst: f64 = 0.0;
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(a.as_slice(), b.as_slice()) - target).norm());
            }
        }
        if !(worst < tol::ORTHONORMALITY) {
            return Err(Error::NotOrthonormal { residual: worst });
        }
        Ok(Self { vectors })
    }

    /// The reference basis `e_1 … e_N`, all phases zero.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(Self { vectors: (0..n).map(|j| PureState::basis(n, j)).collect::<Result<_>>()? })
    }

    /// Columns of a unitary matrix.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
        }
        Self::new((0..u.cols()).map(|c| PureState::normalized(u.column(c))).collect::<Result<_>>()?)
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    /// The matrix whose columns are the basis vectors.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let n = self.n();
        ComplexMatrix::from_fn(n, n, |r, c| self.vectors[c].as_slice()[r])
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `p'_i = |⟨v'_i, v⟩|²`.
pub fn born_probs(v: &PureState, basis: &MeasurementBasis) -> Result<ProbVec> {
    check_dim(basis.n(), v.n())?;
    let p: Vec<f64> = basis.vectors().iter().map(|b| inner(b.as_slice(), v.as_slice()).norm_sqr()).collect();
    ProbVec::with_tolerance(p, 1e-10)
}

/// The `U`, `A`, `V` arrangement simulating a measurement in `basis` with the
/// reference measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationArrangement {
    basis: MeasurementBasis,
    u: ComplexMatrix,
    v: ComplexMatrix,
}

impl SimulationArrangement {
    pub fn basis(&self) -> &MeasurementBasis {
        &self.basis
    }

    /// The interaction before the reference measurement.
    pub fn pre(&self) -> &ComplexMatrix {
        &self.u
    }

    /// The interaction after it.
    pub fn post(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// Exact distribution of the reference result: `|⟨e_i, U v⟩|²`.
    pub fn result_distribution(&self, v: &PureState) -> Result<Vec<f64>> {
        check_dim(self.n(), v.n())?;
        Ok(self.u.mul_vec(v.as_slice())?.iter().map(|z| z.norm_sqr()).collect())
    }

    /// Largest deviation from `|⟨e_i, U v'_i⟩| = 1` and `|⟨v'_i, V e_i⟩| = 1`.
    pub fn relation_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, b) in self.basis.vectors().iter().enumerate() {
            let uv = self.u.mul_vec(b.as_slice()).map(|x| x[i].norm()).unwrap_or(0.0);
            let ve = inner(b.as_slice(), &self.v.column(i)).norm();
            worst = worst.max((uv - 1.0).abs()).max((ve - 1.0).abs());
        }
        worst
    }
}

/// `U = Σ e^{iϑ_i} e_i v'_i†`, `V = Σ e^{iϑ'_i} v'_i e_i†`.
pub fn build_simulation(
    basis: &MeasurementBasis,
    theta: &[f64],
    theta_prime: &[f64],
) -> Result<SimulationArrangement> {
    let n = basis.n();
    check_dim(n, theta.len())?;
    check_dim(n, theta_prime.len())?;
    let vs = basis.vectors();
    let u = ComplexMatrix::from_fn(n, n, |r, c| Complex64::from_polar(1.0, theta[r]) * vs[r].as_slice()[c].conj());
    let v = ComplexMatrix::from_fn(n, n, |r, c| Complex64::from_polar(1.0, theta_prime[c]) * vs[c].as_slice()[r]);
    Ok(SimulationArrangement { basis: basis.clone(), u, v })
}

/// One run of the arrangement: draws the reference result by inverse CDF on
/// `|⟨e_i, U v⟩|²` and returns it with the output state `V e_i`.
pub fn simulate_measurement<R: Rng + ?Sized>(
    arrangement: &SimulationArrangement,
    v: &PureState,
    rng: &mut R,
) -> Result<(usize, PureState)> {
    let dist = arrangement.result_distribution(v)?;
    let i = sample_index(&dist, rng);
    Ok((i, PureState::normalized(arrangement.v.column(i))?))
}

/// `A' = Σ a'_i v'_i v'_i†`, given by its eigenbasis and real eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    basis: MeasurementBasis,
    values: Vec<f64>,
}

impl Observable {
    pub fn new(basis: MeasurementBasis, values: Vec<f64>) -> Result<Self> {
        check_dim(basis.n(), values.len())?;
        if let Some(index) = values.iter().position(|a| !a.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { basis, values })
    }

    /// Like [`new`](Self::new) but rejects repeated values.
    pub fn non_degenerate(basis: MeasurementBasis, values: Vec<f64>) -> Result<Self> {
        let obs = Self::new(basis, values)?;
        if obs.is_degenerate() {
            return Err(Error::InvalidArgument("observable values must be distinct"));
        }
        Ok(obs)
    }

    pub fn basis(&self) -> &MeasurementBasis {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.values.iter().enumerate().any(|(i, a)| self.values[i + 1..].contains(a))
    }

    /// `Σ a'_i v'_i v'_i†`.
    pub fn matrix(&self) -> ComplexMatrix {
        let n = self.n();
        self.basis.vectors().iter().zip(&self.values).fold(ComplexMatrix::zeros(n, n), |acc, (v, &a)| {
            acc.add(&ComplexMatrix::outer(v.as_slice(), v.as_slice()).scale(Complex64::new(a, 0.0)))
        })
    }
}

/// `⟨A'⟩ = Σ a'_i p'_i`.
pub fn expected_value(v: &PureState, obs: &Observable) -> Result<f64> {
    let p = born_probs(v, obs.basis())?;
    Ok(p.as_slice().iter().zip(obs.values()).map(|(p, a)| p * a).sum())
}

/// `v† A' v` computed from the reconstructed matrix; the second route to
/// [`expected_value`].
pub fn expected_value_matrix(v: &PureState, obs: &Observable) -> Result<f64> {
    check_dim(obs.n(), v.n())?;
    let av = obs.matrix().mul_vec(v.as_slice())?;
    Ok(inner(v.as_slice(), &av).re)
}

/// Result values of a degenerate measurement, one per result of the
/// non-degenerate measurement it coarse-grains.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateGrouping {
    value_of: Vec<f64>,
}

impl DegenerateGrouping {
    pub fn new(value_of: Vec<f64>) -> Result<Self> {
        if value_of.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = value_of.iter().position(|b| !b.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { value_of })
    }

    pub fn values(&self) -> &[f64] {
        &self.value_of
    }

    /// Distinct values in order of first appearance.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &b in &self.value_of {
            if !out.contains(&b) {
                out.push(b);
            }
        }
        out
    }

    /// No two results share a value.
    pub fn is_trivial(&self) -> bool {
        self.distinct_values().len() == self.value_of.len()
    }
}

/// Born probabilities summed over results that share a value. Values are
/// compared exactly; entries appear in order of first appearance.
pub fn degenerate_probs(v: &PureState, basis: &MeasurementBasis, grouping: &DegenerateGrouping) -> Result<Vec<(f64, f64)>> {
    check_dim(basis.n(), grouping.values().len())?;
    let p = born_probs(v, basis)?;
    let mut out: Vec<(f64, f64)> = grouping.distinct_values().into_iter().map(|b| (b, 0.0)).collect();
    for (&b, &pi) in grouping.values().iter().zip(p.as_slice()) {
        if let Some(entry) = out.iter_mut().find(|(value, _)| *value == b) {
            entry.1 += pi;
        }
    }
    Ok(out)
}
