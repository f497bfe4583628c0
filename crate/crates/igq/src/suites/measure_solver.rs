//! Translation invariance of the induced measure singles out `cos²`.

use std::f64::consts::PI;

use igq_core::measure_solver::{density_spread, is_translation_invariant, Branch, EmbeddingFunction, FOdeSolver};

use crate::config::Settings;
use crate::report::{run_check, CheckReport, Measured};

/// `(a, b, χ0)` cases for the ODE comparison.
const ODE_CASES: [(f64, f64, f64); 3] = [(1.0, 0.3, 0.2), (-2.0, 1.0, 0.1), (0.5, 0.0, 1.0)];
const ODE_STEP: f64 = 1e-4;
const GRID_POINTS: usize = 1000;
const NON_SINUSOIDAL: [&str; 2] = ["quadratic", "logistic"];

/// `points` cell midpoints of `[lo, hi]`.
fn midpoints(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let h = (hi - lo) / points as f64;
    (0..points).map(|i| lo + (i as f64 + 0.5) * h).collect()
}

/// Largest `|F_ode − cos²(aχ + b)|` over one period starting at `chi0`.
pub fn ode_error(a: f64, b: f64, chi0: f64) -> igq_core::Result<(f64, usize)> {
    let theta0 = a * chi0 + b;
    let f0 = theta0.cos().powi(2);
    let slope = -a * (2.0 * theta0).sin();
    let branch = if slope >= 0.0 { Branch::Rising } else { Branch::Falling };
    let period = PI / a.abs();
    let grid: Vec<f64> = (0..=GRID_POINTS).map(|i| chi0 + period * i as f64 / GRID_POINTS as f64).collect();
    let sol = FOdeSolver::new(a, ODE_STEP)?.solve(f0, chi0, branch, &grid)?;
    let err = grid.iter().zip(&sol.values).map(|(&x, f)| (f - (a * x + b).cos().powi(2)).abs()).fold(0.0, f64::max);
    Ok((err, sol.branch_switches.len()))
}

pub fn run(s: &Settings) -> Vec<CheckReport> {
    vec![
        run_check(s, "measure-solver.ode_vs_cos2", 1e-6, ODE_CASES.len(), |_, _| {
            let mut worst: f64 = 0.0;
            let mut switches = Vec::new();
            for (a, b, chi0) in ODE_CASES {
                let (err, k) = ode_error(a, b, chi0)?;
                worst = worst.max(err);
                switches.push(k);
            }
            Ok(Measured::new(worst).with("step", ODE_STEP).with("branch_switches", switches))
        }),
        run_check(s, "measure-solver.cos2_density", 1e-9, GRID_POINTS, |_, tol| {
            // Cell midpoints never land on a turning point of cos².
            let f = EmbeddingFunction::cos_squared(1.0, 0.0, (0.0, PI))?;
            let grid = midpoints(0.0, PI, GRID_POINTS);
            let spread = density_spread(&f, &grid)?;
            let invariant = is_translation_invariant(&f, &grid, tol)?;
            Ok(Measured::new(spread.relative_variation())
                .with("min", spread.min)
                .with("max", spread.max)
                .with("translation_invariant", invariant))
        }),
        run_check(s, "measure-solver.non_sinusoidal_rejected", 0.5, NON_SINUSOIDAL.len(), |_, _| {
            // Residual counts families wrongly accepted or varying by 10% or less.
            let mut accepted = 0;
            let mut variations = serde_json::Map::new();
            for name in NON_SINUSOIDAL {
                let f = EmbeddingFunction::by_name(name).ok_or_else(|| anyhow::anyhow!("unknown family {name}"))?;
                let grid = midpoints(f.domain().0, f.domain().1, GRID_POINTS);
                f.validate(&grid)?;
                let variation = density_spread(&f, &grid)?.relative_variation();
                if is_translation_invariant(&f, &grid, 0.1)? || variation <= 0.1 {
                    accepted += 1;
                }
                variations.insert(name.to_string(), variation.into());
            }
            Ok(Measured::new(accepted as f64).with("relative_variation", variations))
        }),
    ]
}
