//! Discrete probability distributions and the information metric.
//!
//! Two coins with nearby bias vectors `p` and `p + dp` can only be told apart
//! after many tosses; the expected log Bayes factor after `n` tosses is
//! `n Σ p_i ln(p_i / p'_i)`, which to second order is `2n · ds²` with
//! `ds² = ¼ Σ dp_i² / p_i`. That quadratic form is the information metric.
//! Under `p_i = x_i²` it becomes the flat metric on the unit sphere.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;

use crate::{tol, Error, Result};

/// A point on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec {
    entries: Vec<f64>,
}

impl ProbVec {
    /// Validates nonnegativity and normalisation (within [`tol::NORMALIZATION`]).
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(entries, tol::NORMALIZATION)
    }

    pub fn with_tolerance(entries: Vec<f64>, tolerance: f64) -> Result<Self> {
        check_entries(&entries)?;
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { entries })
    }

    /// Divides by the sum. Meant for user input whose sum has drifted.
    pub fn renormalized(entries: Vec<f64>) -> Result<Self> {
        check_entries(&entries)?;
        let sum: f64 = entries.iter().sum();
        if sum <= 0.0 {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { entries: entries.into_iter().map(|p| p / sum).collect() })
    }

    /// `(1/M, …, 1/M)`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Empty);
        }
        Ok(Self { entries: alloc::vec![1.0 / m as f64; m] })
    }

    pub(crate) fn from_trusted(entries: Vec<f64>) -> Self {
        debug_assert!(check_entries(&entries).is_ok());
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.entries
    }

    /// Moves along `dp`. Fails if the result leaves the simplex.
    pub fn displaced(&self, dp: &TangentVec) -> Result<Self> {
        same_len(self.len(), dp.len())?;
        Self::new(self.entries.iter().zip(dp.as_slice()).map(|(p, d)| p + d).collect())
    }
}

fn check_entries(entries: &[f64]) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in entries.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value < 0.0 {
            return Err(Error::NegativeProbability { index, value });
        }
    }
    Ok(())
}

fn same_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A displacement that keeps a distribution normalised (entries sum to zero).
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVec {
    entries: Vec<f64>,
}

impl TangentVec {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = entries.iter().position(|d| !d.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let sum: f64 = entries.iter().sum();
        if sum.abs() > tol::NORMALIZATION {
            return Err(Error::NotTangent { sum });
        }
        Ok(Self { entries })
    }

    /// `p' − p` for two distributions of equal length.
    pub fn between(p: &ProbVec, p_prime: &ProbVec) -> Result<Self> {
        same_len(p.len(), p_prime.len())?;
        Self::new(p_prime.as_slice().iter().zip(p.as_slice()).map(|(b, a)| b - a).collect())
    }

    pub fn zeros(m: usize) -> Self {
        Self { entries: alloc::vec![0.0; m] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|d| d * d).sum::<f64>().sqrt()
    }
}

/// Squared information length `ds² = ¼ Σ dp_i² / p_i`.
///
/// Entries where both `p_i` and `dp_i` vanish are skipped; a nonzero `dp_i` at a
/// zero-probability entry is an error, since the metric is singular there.
pub fn info_metric_ds2(p: &ProbVec, dp: &TangentVec) -> Result<f64> {
    same_len(p.len(), dp.len())?;
    let mut total = 0.0;
    for (index, (&pi, &di)) in p.as_slice().iter().zip(dp.as_slice()).enumerate() {
        if pi == 0.0 {
            if di != 0.0 {
                return Err(Error::SingularMetric { index });
            }
            continue;
        }
        total += di * di / pi;
    }
    Ok(0.25 * total)
}

/// `(√p_1, …, √p_M)`, a unit vector.
pub fn sqrt_embedding(p: &ProbVec) -> Vec<f64> {
    p.as_slice().iter().map(|x| x.sqrt()).collect()
}

/// Great-circle distance between the square-root embeddings,
/// `arccos Σ √(p_i p'_i)`.
///
/// Evaluated through the chord length, `2 asin(‖√p − √p'‖ / 2)`, which equals the
/// arccos form but keeps full relative precision for nearby points.
pub fn geodesic_distance(p: &ProbVec, p_prime: &ProbVec) -> Result<f64> {
    same_len(p.len(), p_prime.len())?;
    let chord = p
        .as_slice()
        .iter()
        .zip(p_prime.as_slice())
        .map(|(a, b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum::<f64>()
        .sqrt();
    Ok(2.0 * (0.5 * chord).min(1.0).asin())
}

/// Expected log Bayes factor `n Σ p_i ln(p_i / p'_i)` for `n` tosses of coin
/// `p` against coin `p'` with equal priors.
pub fn log_bayes_factor(p: &ProbVec, p_prime: &ProbVec, n: u64) -> Result<f64> {
    same_len(p.len(), p_prime.len())?;
    if n == 0 {
        return Err(Error::InvalidArgument("toss count must be positive"));
    }
    let mut total = 0.0;
    for (index, (&a, &b)) in p.as_slice().iter().zip(p_prime.as_slice()).enumerate() {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Err(Error::InfiniteEvidence { index });
        }
        total += a * (a / b).ln();
    }
    Ok(n as f64 * total)
}

/// One simulated dataset: toss coin `p` `n` times and return
/// `ln(P_A / P_B)` for the observed counts, i.e. `Σ_k ln(p_k / p'_k)` over tosses.
///
/// The mean over many datasets estimates [`log_bayes_factor`].
pub fn sample_log_likelihood_ratio<R: Rng + ?Sized>(
    p: &ProbVec,
    p_prime: &ProbVec,
    n: u64,
    rng: &mut R,
) -> Result<f64> {
    same_len(p.len(), p_prime.len())?;
    let mut log_ratio = Vec::with_capacity(p.len());
    for (index, (&a, &b)) in p.as_slice().iter().zip(p_prime.as_slice()).enumerate() {
        if a > 0.0 && b == 0.0 {
            return Err(Error::InfiniteEvidence { index });
        }
        log_ratio.push(if a > 0.0 { (a / b).ln() } else { 0.0 });
    }
    let mut counts = alloc::vec![0u64; p.len()];
    for _ in 0..n {
        counts[sample_index(p.as_slice(), rng)] += 1;
    }
    Ok(counts.iter().zip(&log_ratio).map(|(&k, l)| k as f64 * l).sum())
}

/// Inverse-CDF draw of an index from (possibly unnormalised) weights.
pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last_positive = i;
        }
        acc += w;
        if u < acc {
            return i;
        }
    }
    // Rounding left u at or past the final partial sum.
    last_positive
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pv(v: &[f64]) -> ProbVec {
        ProbVec::new(v.to_vec()).unwrap()
    }

    fn tv(v: &[f64]) -> TangentVec {
        TangentVec::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_invalid_distributions() {
        assert!(matches!(ProbVec::new(vec![0.5, 0.6]), Err(Error::NotNormalized { .. })));
        assert!(matches!(ProbVec::new(vec![1.5, -0.5]), Err(Error::NegativeProbability { index: 1, .. })));
        assert!(matches!(ProbVec::new(vec![f64::NAN, 1.0]), Err(Error::NonFinite { index: 0 })));
        assert!(matches!(ProbVec::new(vec![]), Err(Error::Empty)));
        assert!(matches!(TangentVec::new(vec![0.1, 0.1]), Err(Error::NotTangent { .. })));
    }

    #[test]
    fn renormalize_fixes_drift() {
        let p = ProbVec::renormalized(vec![1.0, 3.0]).unwrap();
        assert_eq!(p.as_slice(), &[0.25, 0.75]);
        assert!(ProbVec::renormalized(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn metric_symmetric_case() {
        let eps = 1e-3;
        let ds2 = info_metric_ds2(&pv(&[0.5, 0.5]), &tv(&[eps, -eps])).unwrap();
        assert!((ds2 - eps * eps).abs() < 1e-20);
        assert_eq!(info_metric_ds2(&pv(&[0.2, 0.3, 0.5]), &TangentVec::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn metric_quarter_three_quarters_matches_geodesic_limit() {
        // Independent route: geodesic distance squared over ε² as ε → 0.
        let p = pv(&[0.25, 0.75]);
        let eps = 1e-5;
        let d = geodesic_distance(&p, &pv(&[0.25 + eps, 0.75 - eps])).unwrap();
        let limit = d * d / (eps * eps);
        assert!((limit - 4.0 / 3.0).abs() < 1e-4, "{limit}");

        let ds2 = info_metric_ds2(&p, &tv(&[eps, -eps])).unwrap();
        assert!((ds2 / (eps * eps) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn metric_boundary_handling() {
        let p = pv(&[1.0, 0.0]);
        assert!(matches!(info_metric_ds2(&p, &tv(&[-0.1, 0.1])), Err(Error::SingularMetric { index: 1 })));
        let p = pv(&[0.5, 0.5, 0.0]);
        let ds2 = info_metric_ds2(&p, &tv(&[0.01, -0.01, 0.0])).unwrap();
        assert!((ds2 - 1e-4).abs() < 1e-18);
        assert!(matches!(
            info_metric_ds2(&p, &tv(&[0.01, -0.01])),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn sqrt_embedding_examples() {
        assert_eq!(sqrt_embedding(&pv(&[1.0, 0.0])), vec![1.0, 0.0]);
        let e = sqrt_embedding(&pv(&[0.25, 0.75]));
        assert!((e[0] - 0.5).abs() < 1e-15 && (e[1] - 0.866_025_403_784_438_6).abs() < 1e-15);
        let u = sqrt_embedding(&ProbVec::uniform(4).unwrap());
        assert!(u.iter().all(|x| (x - 0.5).abs() < 1e-15));
    }

    #[test]
    fn geodesic_examples() {
        let p = pv(&[0.3, 0.7]);
        assert_eq!(geodesic_distance(&p, &p).unwrap(), 0.0);
        let d = geodesic_distance(&pv(&[1.0, 0.0]), &pv(&[0.0, 1.0])).unwrap();
        assert!((d - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
        // Agrees with the arccos form away from the coincidence limit.
        let (a, b) = (pv(&[0.2, 0.3, 0.5]), pv(&[0.6, 0.1, 0.3]));
        let bc: f64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x * y).sqrt()).sum();
        assert!((geodesic_distance(&a, &b).unwrap() - bc.acos()).abs() < 1e-14);
    }

    #[test]
    fn geodesic_over_metric_tends_to_one() {
        let p = pv(&[0.5, 0.5]);
        let mut prev = f64::INFINITY;
        for &delta in &[1e-2, 1e-3, 1e-4] {
            let d = geodesic_distance(&p, &pv(&[0.5 + delta, 0.5 - delta])).unwrap();
            let ds2 = info_metric_ds2(&p, &tv(&[delta, -delta])).unwrap();
            let err = (d * d / ds2 - 1.0).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-7);
    }

    #[test]
    fn bayes_factor_examples() {
        let p = pv(&[0.5, 0.5]);
        assert_eq!(log_bayes_factor(&p, &p, 10).unwrap(), 0.0);
        // n Σ p ln(p/p') summed by hand: 50 ln(25/24).
        let v = log_bayes_factor(&p, &pv(&[0.6, 0.4]), 100).unwrap();
        assert!((v - 2.041_099_726_012_759).abs() < 1e-12, "{v}");
        assert!(matches!(
            log_bayes_factor(&p, &pv(&[1.0, 0.0]), 1),
            Err(Error::InfiniteEvidence { index: 1 })
        ));
        // Zero-probability entries of p carry no evidence.
        assert!(log_bayes_factor(&pv(&[1.0, 0.0]), &pv(&[0.5, 0.5]), 1).is_ok());
    }

    #[test]
    fn bayes_factor_quadratic_expansion() {
        let p = pv(&[0.2, 0.3, 0.5]);
        let dp = tv(&[1e-4, 2e-4, -3e-4]);
        let lbf = log_bayes_factor(&p, &p.displaced(&dp).unwrap(), 50).unwrap();
        let quad = 2.0 * 50.0 * info_metric_ds2(&p, &dp).unwrap();
        assert!((lbf / quad - 1.0).abs() < 1e-3);
    }

    #[test]
    fn monte_carlo_ratio_is_unbiased_for_small_sample() {
        let p = pv(&[0.5, 0.5]);
        let q = pv(&[0.6, 0.4]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 20_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..trials {
            let x = sample_log_likelihood_ratio(&p, &q, 100, &mut rng).unwrap();
            s += x;
            s2 += x * x;
        }
        let mean = s / trials as f64;
        let se = ((s2 / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert!((mean - 2.041_099_726_012_759).abs() < 3.0 * se);
    }

    #[test]
    fn sample_index_skips_zero_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_eq!(sample_index(&[0.0, 1.0, 0.0], &mut rng), 1);
        }
    }
}
