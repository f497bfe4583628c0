//! Simulating any measurement with the reference measurement and two unitaries.

use std::f64::consts::TAU;

use igq_core::measurement::{born_probs, build_simulation, simulate_measurement, SimulationArrangement};
use igq_core::sampling::{haar_unitary, random_state};
use igq_core::MeasurementBasis;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::Settings;
use crate::report::{run_check, CheckReport, Measured};

fn random_arrangement(n: usize, rng: &mut ChaCha8Rng) -> igq_core::Result<SimulationArrangement> {
    let basis = MeasurementBasis::from_unitary(&haar_unitary(n, rng))?;
    let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
    let theta_prime: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
    build_simulation(&basis, &theta, &theta_prime)
}

/// Largest `|k_i/T − p_i| / σ_i` over results, `σ_i = √(p_i(1 − p_i)/T)`.
/// A result with `σ_i = 0` must have the exact count.
pub fn max_binomial_z(counts: &[u64], p: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let t = total as f64;
    counts
        .iter()
        .zip(p)
        .map(|(&k, &pi)| {
            let sigma = (pi * (1.0 - pi) / t).sqrt();
            let diff = (k as f64 / t - pi).abs();
            if sigma > 0.0 {
                diff / sigma
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

pub fn run(s: &Settings) -> Vec<CheckReport> {
    let dims = s.dimensions(&[2, 3, 5]);
    let pairs = s.trials("simulate", 1000);
    let runs = 100_000;
    vec![
        run_check(s, "simulate.exact_distribution", 1e-12, pairs * dims.len(), |rng, _| {
            // Two independent choices of the free phases per (basis, state) pair.
            let mut worst: f64 = 0.0;
            for &n in &dims {
                for _ in 0..pairs {
                    let arr = random_arrangement(n, rng)?;
                    let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
                    let other = build_simulation(arr.basis(), &theta, &theta)?;
                    let v = random_state(n, rng);
                    let born = born_probs(&v, arr.basis())?;
                    for dist in [arr.result_distribution(&v)?, other.result_distribution(&v)?] {
                        for (a, b) in dist.iter().zip(born.as_slice()) {
                            worst = worst.max((a - b).abs());
                        }
                    }
                }
            }
            Ok(Measured::new(worst).with("dimensions", dims.clone()))
        }),
        run_check(s, "simulate.sampled_frequencies", 3.0, runs * dims.len(), |rng, _| {
            let mut worst: f64 = 0.0;
            let mut per_dim = serde_json::Map::new();
            for &n in &dims {
                let arr = random_arrangement(n, rng)?;
                let v = random_state(n, rng);
                let mut counts = vec![0u64; n];
                for _ in 0..runs {
                    counts[simulate_measurement(&arr, &v, rng)?.0] += 1;
                }
                let z = max_binomial_z(&counts, born_probs(&v, arr.basis())?.as_slice());
                per_dim.insert(n.to_string(), z.into());
                worst = worst.max(z);
            }
            Ok(Measured::new(worst).with("max_z_by_dimension", per_dim).with("runs", runs))
        }),
        run_check(s, "simulate.reproducibility", 0.5, runs, |rng, _| {
            // Measuring the output state again gives the same result.
            let arrangements = dims.iter().map(|&n| random_arrangement(n, rng)).collect::<Result<Vec<_>, _>>()?;
            let mut mismatches = 0usize;
            for trial in 0..runs {
                let arr = &arrangements[trial % arrangements.len()];
                let v = random_state(arr.n(), rng);
                let (first, out) = simulate_measurement(arr, &v, rng)?;
                let (second, _) = simulate_measurement(arr, &out, rng)?;
                mismatches += usize::from(first != second);
            }
            Ok(Measured::new(mismatches as f64).with("repeats", runs))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_z_edge_cases() {
        assert_eq!(max_binomial_z(&[50, 50], &[0.5, 0.5]), 0.0);
        assert_eq!(max_binomial_z(&[100, 0], &[1.0, 0.0]), 0.0);
        assert_eq!(max_binomial_z(&[99, 1], &[1.0, 0.0]), f64::INFINITY);
        // 60 of 100 against p = ½: (0.1) / 0.05 = 2σ.
        assert!((max_binomial_z(&[60, 40], &[0.5, 0.5]) - 2.0).abs() < 1e-12);
    }
}
