//! Significance tests for the sampling checks. Needs `std` for the special
//! functions behind the chi-squared survival function.

use alloc::vec::Vec;

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::classify::{apply, GaugeMap};
use crate::qspace::PureState;
use crate::sampling::{pushforward_histograms, Histogram};
use crate::{Error, Result};

/// Significance level of every statistical verdict.
pub const SIGNIFICANCE: f64 = 1e-3;

/// `P(χ²_dof ≥ stat)`.
pub fn chi_squared_p_value(stat: f64, dof: usize) -> Result<f64> {
    let dist = ChiSquared::new(dof as f64).map_err(|_| Error::InvalidArgument("degrees of freedom must be positive"))?;
    Ok(dist.sf(stat))
}

/// Asymptotic p-value of the two-sample Kolmogorov–Smirnov statistic `d` for
/// sample sizes `na` and `nb`.
pub fn ks_p_value(d: f64, na: usize, nb: usize) -> f64 {
    let ne = (na as f64 * nb as f64) / (na + nb) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Outcome of a uniformity test across several statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformityVerdict {
    /// Pearson statistic of the least uniform histogram.
    pub statistic: f64,
    pub dof: usize,
    /// Bonferroni-adjusted p-value: `min(1, k·min_i p_i)` over `k` statistics.
    pub p_value: f64,
    pub passed: bool,
    pub per_statistic: Vec<(Histogram, f64)>,
}

/// Combines per-statistic chi-squared tests with a Bonferroni correction at
/// [`SIGNIFICANCE`].
pub fn uniformity_verdict(histograms: Vec<Histogram>) -> Result<UniformityVerdict> {
    if histograms.is_empty() {
        return Err(Error::Empty);
    }
    let k = histograms.len() as f64;
    let mut per_statistic = Vec::with_capacity(histograms.len());
    let mut worst = (f64::INFINITY, 0.0, 0);
    for h in histograms {
        let (stat, dof) = h.chi_squared();
        let p = chi_squared_p_value(stat, dof)?;
        if p < worst.0 {
            worst = (p, stat, dof);
        }
        per_statistic.push((h, p));
    }
    let p_value = (worst.0 * k).min(1.0);
    Ok(UniformityVerdict { statistic: worst.1, dof: worst.2, p_value, passed: p_value >= SIGNIFICANCE, per_statistic })
}

/// Pushes uniform states of dimension `n` through `map` and tests the images
/// for uniformity.
pub fn map_uniformity_check<R, F>(n: usize, map: F, samples: usize, bins: usize, rng: &mut R) -> Result<UniformityVerdict>
where
    R: Rng + ?Sized,
    F: Fn(&PureState) -> Result<PureState>,
{
    uniformity_verdict(pushforward_histograms(n, map, samples, bins, rng)?)
}

/// Whether the uniform measure is preserved by `g`.
pub fn measure_invariance_check<R: Rng + ?Sized>(
    g: &GaugeMap,
    samples: usize,
    bins: usize,
    rng: &mut R,
) -> Result<UniformityVerdict> {
    let n = g.matrix().ok_or(Error::NotGaugeInvariant)?.rows();
    map_uniformity_check(n, |v| apply(g, v), samples, bins, rng)
}
