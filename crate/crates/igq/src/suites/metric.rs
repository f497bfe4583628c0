//! The information metric on the simplex against the flat metric on Q-space
//! and on complex states.

use igq_core::qspace::{from_phase_rep, to_complex};
use igq_core::sampling::random_qvector;
use igq_core::simplex::{geodesic_distance, info_metric_ds2};
use igq_core::{PhaseConstants, PhaseRep, ProbVec, TangentVec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::Settings;
use crate::report::{run_check, CheckReport, Measured};

const STEP: f64 = 1e-6;

fn interior(n: usize, rng: &mut ChaCha8Rng) -> igq_core::Result<ProbVec> {
    ProbVec::renormalized((0..n).map(|_| rng.random_range(0.05..1.0)).collect())
}

/// A random point, a tangent step of length [`STEP`] and random phases.
fn sample(n: usize, rng: &mut ChaCha8Rng) -> igq_core::Result<(ProbVec, TangentVec, Vec<f64>)> {
    let p = interior(n, rng)?;
    let q = interior(n, rng)?;
    let raw: Vec<f64> = p.as_slice().iter().zip(q.as_slice()).map(|(a, b)| b - a).collect();
    // Fixed length keeps roundoff in dQ well below the tolerance.
    let len = raw.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let dp = TangentVec::new(raw.iter().map(|x| x * STEP / len).collect())?;
    let phases = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    Ok((p, dp, phases))
}

/// A step of length [`STEP`] tangent to the sphere at `q`.
fn tangent_step(q: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = q.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
    let along: f64 = raw.iter().zip(q).map(|(r, x)| r * x).sum();
    let t: Vec<f64> = raw.iter().zip(q).map(|(r, x)| r - along * x).collect();
    let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
    t.iter().map(|x| x * STEP / norm).collect()
}

fn rep(p: ProbVec, phases: &[f64]) -> igq_core::Result<PhaseRep> {
    PhaseRep::new(p, phases.iter().map(|&x| Some(x)).collect(), PhaseConstants::default())
}

pub fn run(s: &Settings) -> Vec<CheckReport> {
    let dims = s.dimensions(&[2, 3, 4, 5]);
    let trials = s.trials("metric", 1000);
    let total = trials * dims.len();
    vec![
        run_check(s, "metric.qspace_euclidean", 1e-8, total, |rng, _| {
            // ds² on the simplex equals |dQ|² when the phases are held fixed.
            // dQ is a central difference, so the ratio is exact to O(h²).
            let mut worst: f64 = 0.0;
            for &n in &dims {
                for _ in 0..trials {
                    let (p, dp, phases) = sample(n, rng)?;
                    let back = TangentVec::new(dp.as_slice().iter().map(|x| -x).collect())?;
                    let plus = from_phase_rep(&rep(p.displaced(&dp)?, &phases)?);
                    let minus = from_phase_rep(&rep(p.displaced(&back)?, &phases)?);
                    let dq2 = plus.as_slice().iter().zip(minus.as_slice()).map(|(x, y)| ((x - y) / 2.0).powi(2)).sum::<f64>();
                    worst = worst.max((dq2 / info_metric_ds2(&p, &dp)? - 1.0).abs());
                }
            }
            Ok(Measured::new(worst).with("dimensions", dims.clone()).with("step", STEP))
        }),
        run_check(s, "metric.outcome_pullback", 1e-8, total, |rng, _| {
            // |dQ|² equals ¼ Σ dP²/P over the 2N outcome probabilities P = Q².
            let mut worst: f64 = 0.0;
            for &n in &dims {
                for _ in 0..trials {
                    let q = random_qvector(n, rng);
                    let dq = tangent_step(q.as_slice(), rng);
                    let at = |sign: f64| -> Vec<f64> {
                        q.as_slice().iter().zip(&dq).map(|(x, d)| (x + sign * d).powi(2)).collect()
                    };
                    let (hi, lo) = (at(1.0), at(-1.0));
                    let fisher: f64 = q
                        .as_slice()
                        .iter()
                        .zip(hi.iter().zip(&lo))
                        .map(|(x, (a, b))| ((a - b) / 2.0).powi(2) / (x * x))
                        .sum::<f64>()
                        / 4.0;
                    let flat: f64 = dq.iter().map(|d| d * d).sum();
                    worst = worst.max((fisher / flat - 1.0).abs());
                }
            }
            Ok(Measured::new(worst).with("dimensions", dims.clone()).with("step", STEP))
        }),
        run_check(s, "metric.complex_flat", 1e-12, total, |rng, _| {
            // |dv|² in complex form equals |dQ|².
            let mut worst: f64 = 0.0;
            for &n in &dims {
                for _ in 0..trials {
                    let (p, dp, phases) = sample(n, rng)?;
                    let a = from_phase_rep(&rep(p.clone(), &phases)?);
                    let b = from_phase_rep(&rep(p.displaced(&dp)?, &phases)?);
                    let dq2: f64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).powi(2)).sum();
                    let (va, vb) = (to_complex(&a), to_complex(&b));
                    let dv2: f64 = va.as_slice().iter().zip(vb.as_slice()).map(|(x, y)| (x - y).norm_sqr()).sum();
                    worst = worst.max((dv2 / dq2 - 1.0).abs());
                }
            }
            Ok(Measured::new(worst).with("dimensions", dims.clone()))
        }),
        run_check(s, "metric.geodesic_limit", 1e-4, total, |rng, _| {
            // The geodesic distance squared approaches ds² for short steps.
            let mut worst: f64 = 0.0;
            for &n in &dims {
                for _ in 0..trials {
                    let (p, dp, _) = sample(n, rng)?;
                    let d = geodesic_distance(&p, &p.displaced(&dp)?)?;
                    worst = worst.max((d * d / info_metric_ds2(&p, &dp)? - 1.0).abs());
                }
            }
            Ok(Measured::new(worst).with("dimensions", dims.clone()).with("step", STEP))
        }),
    ]
}
