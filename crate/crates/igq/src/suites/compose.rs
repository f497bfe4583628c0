//! The composite-system rule.

use igq_core::composite::{compose_phase_reps, energy_additivity_check, tensor, CompositeIndex};
use igq_core::measurement::born_probs;
use igq_core::qspace::{from_complex, from_phase_rep, gauge_shift, to_complex, to_phase_rep};
use igq_core::sampling::{haar_unitary, random_state};
use igq_core::{MeasurementBasis, PureState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::Settings;
use crate::report::{run_check, CheckReport, Measured};

/// A random state with every `|v_i|² ≥ 10⁻⁶`.
fn full_support(n: usize, rng: &mut ChaCha8Rng) -> PureState {
    loop {
        let v = random_state(n, rng);
        if v.as_slice().iter().all(|z| z.norm_sqr() >= 1e-6) {
            return v;
        }
    }
}

fn pick(dims: &[usize], rng: &mut ChaCha8Rng) -> usize {
    dims[rng.random_range(0..dims.len())]
}

pub fn run(s: &Settings) -> Vec<CheckReport> {
    let dims = s.dimensions(&[2, 3]);
    let trials = s.trials("compose", 1000);
    vec![
        run_check(s, "compose.tensor_vs_phase_rule", 1e-12, trials, |rng, _| {
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let (n1, n2) = (pick(&dims, rng), pick(&dims, rng));
                let v1 = full_support(n1, rng);
                let v2 = full_support(n2, rng);
                let rep = compose_phase_reps(&to_phase_rep(&from_complex(&v1)), &to_phase_rep(&from_complex(&v2)))?;
                worst = worst.max(tensor(&v1, &v2).max_abs_diff(&to_complex(&from_phase_rep(&rep))));
            }
            Ok(Measured::new(worst).with("dimensions", dims.clone()))
        }),
        run_check(s, "compose.born_factorization", 1e-12, trials, |rng, _| {
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let (n1, n2) = (pick(&dims, rng), pick(&dims, rng));
                let b1 = MeasurementBasis::from_unitary(&haar_unitary(n1, rng))?;
                let b2 = MeasurementBasis::from_unitary(&haar_unitary(n2, rng))?;
                let product = MeasurementBasis::new(
                    b1.vectors().iter().flat_map(|x| b2.vectors().iter().map(move |y| tensor(x, y))).collect(),
                )?;
                let (v1, v2) = (random_state(n1, rng), random_state(n2, rng));
                let p = born_probs(&tensor(&v1, &v2), &product)?;
                let (p1, p2) = (born_probs(&v1, &b1)?, born_probs(&v2, &b2)?);
                let idx = CompositeIndex::new(n1, n2)?;
                for (l, &pl) in p.as_slice().iter().enumerate() {
                    let (i, j) = idx.split(l);
                    worst = worst.max((pl - p1.as_slice()[i] * p2.as_slice()[j]).abs());
                }
            }
            Ok(Measured::new(worst))
        }),
        run_check(s, "compose.energy_additivity", 1e-12, trials, |rng, _| {
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let (n1, n2) = (pick(&dims, rng), pick(&dims, rng));
                let r1 = to_phase_rep(&from_complex(&full_support(n1, rng)));
                let r2 = to_phase_rep(&from_complex(&full_support(n2, rng)));
                let (e1, e2) = (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
                let dt = rng.random_range(0.0..10.0);
                worst = worst.max(energy_additivity_check(&r1, &r2, e1, e2, dt, 1.0)?);
            }
            Ok(Measured::new(worst).with("alpha", 1.0))
        }),
        run_check(s, "compose.gauge_compatibility", 1e-12, trials, |rng, _| {
            // A global phase on either factor is a global phase on the pair.
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let (n1, n2) = (pick(&dims, rng), pick(&dims, rng));
                let (v1, v2) = (random_state(n1, rng), random_state(n2, rng));
                let phi0 = rng.random_range(0.0..std::f64::consts::TAU);
                let whole = gauge_shift(&tensor(&v1, &v2), phi0);
                worst = worst
                    .max(tensor(&gauge_shift(&v1, phi0), &v2).max_abs_diff(&whole))
                    .max(tensor(&v1, &gauge_shift(&v2, phi0)).max_abs_diff(&whole));
            }
            Ok(Measured::new(worst))
        }),
    ]
}
