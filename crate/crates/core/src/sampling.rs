//! The uniform measure over states and its invariance.
//!
//! In complex form the flat Q-space metric is `ds² = |dv|²`, preserved by every
//! unitary and antiunitary map. Its volume measure is the uniform measure on
//! `S^{2N−1}`, sampled here by normalising `2N` standard normals. Haar-random
//! unitary and orthogonal matrices come from Gram–Schmidt on Gaussian columns
//! (positive diagonal in the triangular factor), which is Haar distributed.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::classify::{apply, GaugeMap};
use crate::linalg::{inner, norm_sqr, wrap_angle, ComplexMatrix, RealMatrix};
use crate::qspace::{PureState, QVector};
use crate::{Error, Result};

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniform point on `S^{2N−1}` as a Q-space vector.
pub fn random_qvector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QVector {
    loop {
        let q: Vec<f64> = (0..2 * n).map(|_| normal(rng)).collect();
        if let Ok(v) = QVector::normalized(q) {
            return v;
        }
    }
}

/// Uniform pure state in `ℂ^N`.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(normal(rng), normal(rng))).collect();
        if let Ok(s) = PureState::normalized(v) {
            return s;
        }
    }
}

/// Haar-random `n × n` unitary.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let columns: Vec<Vec<Complex64>> =
        (0..n).map(|_| (0..n).map(|_| Complex64::new(normal(rng), normal(rng))).collect()).collect();
    let q = gram_schmidt(columns, inner, |a, s| a * s);
    ComplexMatrix::from_fn(n, n, |r, c| q[c][r])
}

/// Haar-random `n × n` real orthogonal matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let columns: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| normal(rng)).collect()).collect();
    let q = gram_schmidt(columns, |a, b| a.iter().zip(b).map(|(x, y)| x * y).sum(), |a, s| a * s);
    RealMatrix::from_fn(n, n, |r, c| q[c][r])
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass. Gaussian columns
/// are linearly independent with probability one.
fn gram_schmidt<T>(
    mut cols: Vec<Vec<T>>,
    dot: impl Fn(&[T], &[T]) -> T,
    scale: impl Fn(T, T) -> T,
) -> Vec<Vec<T>>
where
    T: Copy + core::ops::Sub<Output = T> + core::ops::Mul<Output = T> + Into<Complex64> + From<f64>,
{
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj = dot(&done[k], &rest[0]);
                for (x, e) in rest[0].iter_mut().zip(&done[k]) {
                    *x = *x - scale(*e, proj);
                }
            }
        }
        let norm = cols[j].iter().map(|x| (*x).into().norm_sqr()).sum::<f64>().sqrt();
        let inv = T::from(1.0 / norm);
        for x in cols[j].iter_mut() {
            *x = *x * inv;
        }
    }
    cols
}

/// Deterministic source of uniform states.
#[derive(Debug, Clone)]
pub struct StateSampler {
    n: usize,
    seed: u64,
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(Self { n, seed, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_state(&mut self) -> PureState {
        random_state(self.n, &mut self.rng)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// `count` independent uniform states.
pub fn sample_uniform(sampler: &mut StateSampler, count: usize) -> Result<Vec<PureState>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1"));
    }
    Ok((0..count).map(|_| sampler.next_state()).collect())
}

/// Largest relative change of `|dv|²` under `g` over `pairs` random nearby
/// pairs `(v, v + dv)` with `|dv| = displacement` before renormalisation.
///
/// The displaced point is pushed through the map as a state, so an antiunitary
/// map conjugates both points.
pub fn metric_invariance_check<R: Rng + ?Sized>(
    g: &GaugeMap,
    pairs: usize,
    displacement: f64,
    rng: &mut R,
) -> Result<f64> {
    let n = g.matrix().ok_or(Error::NotGaugeInvariant)?.rows();
    if !(displacement > 0.0 && displacement.is_finite()) {
        return Err(Error::InvalidArgument("displacement must be positive"));
    }
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let v = random_state(n, rng);
        let direction = random_state(n, rng);
        let moved: Vec<Complex64> =
            v.as_slice().iter().zip(direction.as_slice()).map(|(a, d)| a + d * displacement).collect();
        let w = PureState::normalized(moved)?;
        let before = squared_distance(&v, &w);
        let after = squared_distance(&apply(g, &v)?, &apply(g, &w)?);
        worst = worst.max((after - before).abs() / before);
    }
    Ok(worst)
}

fn squared_distance(a: &PureState, b: &PureState) -> f64 {
    let d: Vec<Complex64> = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x - y).collect();
    norm_sqr(&d)
}

/// Low-dimensional statistic of a state whose law under the uniform measure is
/// known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateStatistic {
    /// `|v_i|²`, distributed Beta(1, N − 1).
    Modulus(usize),
    /// `arg v_0`, uniform on `[0, 2π)`.
    Phase,
    /// `arg(v_i v_0*)`, uniform on `[0, 2π)`.
    RelativePhase(usize),
}

impl StateStatistic {
    /// The statistics tested for a state of dimension `n`.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if n >= 2 {
            out.extend((0..n).map(StateStatistic::Modulus));
        }
        out.push(StateStatistic::Phase);
        out.extend((1..n).map(StateStatistic::RelativePhase));
        out
    }

    /// Value of the statistic pushed through its uniform-measure CDF, so that it
    /// is Uniform(0, 1) when the state is uniform.
    pub fn probability_integral_transform(&self, v: &PureState) -> f64 {
        let s = v.as_slice();
        match *self {
            StateStatistic::Modulus(i) => {
                let x = s[i].norm_sqr().min(1.0);
                1.0 - (1.0 - x).powi(s.len() as i32 - 1)
            }
            StateStatistic::Phase => wrap_angle(s[0].arg()) / TAU,
            StateStatistic::RelativePhase(i) => wrap_angle((s[i] * s[0].conj()).arg()) / TAU,
        }
    }
}

/// Equal-probability bin counts of one statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub statistic: StateStatistic,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Pearson statistic against equal expected counts, with `bins − 1` degrees
    /// of freedom.
    pub fn chi_squared(&self) -> (f64, usize) {
        let total: u64 = self.counts.iter().sum();
        let expected = total as f64 / self.counts.len() as f64;
        let stat = self.counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        (stat, self.counts.len() - 1)
    }
}

/// Pushes `samples` uniform states of dimension `n` through `map` and bins each
/// [`StateStatistic`] of the images into `bins` equal-probability bins.
pub fn pushforward_histograms<R, F>(
    n: usize,
    map: F,
    samples: usize,
    bins: usize,
    rng: &mut R,
) -> Result<Vec<Histogram>>
where
    R: Rng + ?Sized,
    F: Fn(&PureState) -> Result<PureState>,
{
    if bins < 2 {
        return Err(Error::InvalidArgument("need at least two bins"));
    }
    let stats = StateStatistic::all(n);
    let mut hists: Vec<Histogram> =
        stats.iter().map(|&statistic| Histogram { statistic, counts: alloc::vec![0; bins] }).collect();
    for _ in 0..samples {
        let image = map(&random_state(n, rng))?;
        for h in hists.iter_mut() {
            let u = h.statistic.probability_integral_transform(&image);
            let bin = ((u * bins as f64) as usize).min(bins - 1);
            h.counts[bin] += 1;
        }
    }
    Ok(hists)
}

/// Negative control for the measure test: `v_i ↦ v_i² / ‖v²‖`. It is not an
/// isometry, and it concentrates weight on the largest components.
pub fn square_and_renormalize(v: &PureState) -> Result<PureState> {
    PureState::normalized(v.as_slice().iter().map(|z| z * z).collect())
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`. Sorts its inputs.
pub fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::realify_unitary;

    #[test]
    fn haar_matrices_are_unitary_and_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..7 {
            assert!(haar_unitary(n, &mut rng).unitarity_residual() < 1e-13);
            assert!(haar_orthogonal(n, &mut rng).orthogonality_residual() < 1e-13);
        }
        assert!(realify_unitary(&haar_unitary(3, &mut rng)).is_ok());
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = StateSampler::new(3, 42).unwrap();
        let mut b = StateSampler::new(3, 42).unwrap();
        assert_eq!(sample_uniform(&mut a, 5).unwrap(), sample_uniform(&mut b, 5).unwrap());
        let mut c = StateSampler::new(3, 43).unwrap();
        assert_ne!(sample_uniform(&mut a, 1).unwrap(), sample_uniform(&mut c, 1).unwrap());
        assert!(sample_uniform(&mut a, 0).is_err());
        assert!(StateSampler::new(0, 1).is_err());
    }

    #[test]
    fn single_level_phase_is_uniform() {
        let mut s = StateSampler::new(1, 7).unwrap();
        let draws = 100_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for v in sample_uniform(&mut s, draws).unwrap() {
            let c2 = (v.as_slice()[0].re).powi(2);
            sum += c2;
            sum2 += c2 * c2;
        }
        let mean = sum / draws as f64;
        let se = ((sum2 / draws as f64 - mean * mean) / draws as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se);
    }

    #[test]
    fn moduli_average_to_one_over_n() {
        let mut s = StateSampler::new(4, 8).unwrap();
        let draws = 100_000;
        let states = sample_uniform(&mut s, draws).unwrap();
        for i in 0..4 {
            let xs: Vec<f64> = states.iter().map(|v| v.as_slice()[i].norm_sqr()).collect();
            let mean = xs.iter().sum::<f64>() / draws as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
            assert!((mean - 0.25).abs() < 3.0 * (var / draws as f64).sqrt());
        }
    }

    #[test]
    fn metric_invariance_identity_and_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(metric_invariance_check(&GaugeMap::identity(3), 100, 1e-3, &mut rng).unwrap(), 0.0);
        let v = haar_unitary(3, &mut rng);
        let dev = metric_invariance_check(&GaugeMap::Unitary(v.clone()), 1000, 1e-3, &mut rng).unwrap();
        assert!(dev < 1e-10, "{dev}");
        let dev = metric_invariance_check(&GaugeMap::Antiunitary(v), 1000, 1e-3, &mut rng).unwrap();
        assert!(dev < 1e-10, "{dev}");
    }

    #[test]
    fn histograms_of_uniform_states_are_flat() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let hists = pushforward_histograms(3, |v| Ok(v.clone()), 20_000, 10, &mut rng).unwrap();
        assert_eq!(hists.len(), 3 + 1 + 2);
        for h in &hists {
            let (stat, dof) = h.chi_squared();
            assert_eq!(dof, 9);
            // 0.9999 quantile of χ²(9) is about 33.7.
            assert!(stat < 33.7, "{:?}: {stat}", h.statistic);
        }
    }

    #[test]
    fn ks_statistic_examples() {
        let mut a = [0.1, 0.2, 0.3];
        let mut b = [0.1, 0.2, 0.3];
        assert_eq!(ks_statistic(&mut a, &mut b), 0.0);
        let mut a = [0.0, 1.0];
        let mut b = [2.0, 3.0];
        assert_eq!(ks_statistic(&mut a, &mut b), 1.0);
    }
}
