//! Born probabilities, subsystem observables and degenerate measurements.

use igq_core::composite::{subsystem_observable, tensor, Position};
use igq_core::measurement::{born_probs, degenerate_probs, expected_value, DegenerateGrouping};
use igq_core::sampling::{haar_unitary, random_state};
use igq_core::{MeasurementBasis, Observable};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::Settings;
use crate::report::{run_check, CheckReport, Measured};

fn random_observable(n: usize, rng: &mut ChaCha8Rng) -> igq_core::Result<Observable> {
    let basis = MeasurementBasis::from_unitary(&haar_unitary(n, rng))?;
    Observable::new(basis, (0..n).map(|_| rng.random_range(-3.0..3.0)).collect())
}

pub fn run(s: &Settings) -> Vec<CheckReport> {
    let dims = s.dimensions(&[2, 3]);
    let trials = s.trials("born", 1000);
    vec![
        run_check(s, "born.eigenstates_certain", 1e-12, trials * dims.len(), |rng, _| {
            let mut worst: f64 = 0.0;
            for &n in &dims {
                for _ in 0..trials {
                    let basis = MeasurementBasis::from_unitary(&haar_unitary(n, rng))?;
                    let j = rng.random_range(0..n);
                    let p = born_probs(&basis.vectors()[j], &basis)?;
                    for (i, &x) in p.as_slice().iter().enumerate() {
                        worst = worst.max((x - if i == j { 1.0 } else { 0.0 }).abs());
                    }
                }
            }
            Ok(Measured::new(worst).with("dimensions", dims.clone()))
        }),
        run_check(s, "born.subsystem_expectation", 1e-12, trials, |rng, _| {
            // ⟨A ⊗ I⟩ and ⟨I ⊗ A⟩ on product states reduce to ⟨A⟩.
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let n1 = dims[rng.random_range(0..dims.len())];
                let n2 = dims[rng.random_range(0..dims.len())];
                let obs = random_observable(n1, rng)?;
                let v1 = random_state(n1, rng);
                let v2 = random_state(n2, rng);
                let single = expected_value(&v1, &obs)?;
                let first = expected_value(&tensor(&v1, &v2), &subsystem_observable(&obs, n2, Position::First)?)?;
                let second = expected_value(&tensor(&v2, &v1), &subsystem_observable(&obs, n2, Position::Second)?)?;
                worst = worst.max((first - single).abs()).max((second - single).abs());
            }
            Ok(Measured::new(worst))
        }),
        run_check(s, "born.degenerate_grouping", 0.5, trials, |rng, _| {
            // Three results, the last two sharing a value: (p₁, p₂ + p₃) bit for bit.
            let grouping = DegenerateGrouping::new(vec![1.0, 2.0, 2.0])?;
            let mut mismatches = 0usize;
            for _ in 0..trials {
                let basis = MeasurementBasis::from_unitary(&haar_unitary(3, rng))?;
                let v = random_state(3, rng);
                let p = born_probs(&v, &basis)?;
                let grouped = degenerate_probs(&v, &basis, &grouping)?;
                let want = [(1.0, p.as_slice()[0]), (2.0, p.as_slice()[1] + p.as_slice()[2])];
                mismatches += usize::from(grouped.as_slice() != want.as_slice());
            }
            Ok(Measured::new(mismatches as f64).with("grouping", vec![1.0, 2.0, 2.0]))
        }),
    ]
}
