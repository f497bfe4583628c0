//! Coin discrimination: the log Bayes factor against `2n·ds²`.

use anyhow::ensure;
use igq_core::simplex::{info_metric_ds2, log_bayes_factor, sample_log_likelihood_ratio};
use igq_core::{ProbVec, TangentVec};

use crate::config::Settings;
use crate::report::{run_check, CheckReport, Measured};

const STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// `|LBF / (2n·ds²) − 1|` for `p = (½, ½)` displaced by `(d, −d)`.
pub fn expansion_error(d: f64, n: u64) -> igq_core::Result<f64> {
    let p = ProbVec::new(vec![0.5, 0.5])?;
    let dp = TangentVec::new(vec![d, -d])?;
    let lbf = log_bayes_factor(&p, &p.displaced(&dp)?, n)?;
    Ok((lbf / (2.0 * n as f64 * info_metric_ds2(&p, &dp)?) - 1.0).abs())
}

pub fn run(s: &Settings) -> Vec<CheckReport> {
    let datasets = s.trials("coin", 100_000);
    vec![
        run_check(s, "coin.bayes_expansion", 0.02, STEPS.len(), |_, _| {
            let errors = STEPS.iter().map(|&d| expansion_error(d, 100)).collect::<Result<Vec<_>, _>>()?;
            // Shrinking |dp| tenfold must shrink the error at least tenfold.
            let linear = errors.windows(2).zip(STEPS.windows(2)).all(|(e, d)| e[1] <= e[0] * (d[1] / d[0]) * 1.01);
            let at_1e3 = errors[1];
            Ok(Measured::new(if linear { at_1e3 } else { f64::INFINITY })
                .with("steps", STEPS.to_vec())
                .with("relative_errors", errors)
                .with("at_least_linear", linear))
        }),
        run_check(s, "coin.monte_carlo", 3.0, datasets, |rng, _| {
            ensure!(datasets >= 2, "need at least two datasets");
            let p = ProbVec::new(vec![0.5, 0.5])?;
            let q = ProbVec::new(vec![0.55, 0.45])?;
            let n = 200;
            let analytic = log_bayes_factor(&p, &q, n)?;
            let samples = (0..datasets).map(|_| sample_log_likelihood_ratio(&p, &q, n, rng)).collect::<Result<Vec<_>, _>>()?;
            let mean = samples.iter().sum::<f64>() / datasets as f64;
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (datasets - 1) as f64;
            let se = (var / datasets as f64).sqrt();
            Ok(Measured::new((mean - analytic).abs() / se)
                .with("analytic", analytic)
                .with("mean", mean)
                .with("standard_error", se)
                .with("n", n))
        }),
    ]
}
