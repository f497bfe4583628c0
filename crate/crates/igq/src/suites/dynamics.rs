//! Stationary evolution and the lattice Hamilton–Jacobi equations.

use igq_core::dynamics::{evolve_stationary, hj_residual, hj_stationary_step, AnalyticFamily, StationaryEvolution};
use igq_core::linalg::{angle_distance, wrap_angle};
use igq_core::{PhaseConstants, PhaseRep};
use rand::Rng;

use crate::config::Settings;
use crate::report::{run_check, CheckReport, Measured};

const CONVERGENCE: f64 = 3.5;
const X_MIN: f64 = -8.0;
const X_MAX: f64 = 8.0;

/// `(continuity, hamilton_jacobi)` residuals of `family` at time `t`.
pub fn family_residual(family: AnalyticFamily, h: f64, dt: f64, t: f64) -> igq_core::Result<(f64, f64)> {
    let sites = ((X_MAX - X_MIN) / h).round() as usize + 1;
    hj_residual(&|time: f64| family.grid_state(X_MIN, h, sites, time), t, dt)
}

/// Residual reduction factors `(continuity, hamilton_jacobi)` when `h` and
/// `Δt` are both halved.
pub fn convergence_ratios(family: AnalyticFamily, h: f64, dt: f64, t: f64) -> igq_core::Result<(f64, f64)> {
    let (c1, j1) = family_residual(family, h, dt, t)?;
    let (c2, j2) = family_residual(family, h / 2.0, dt / 2.0, t)?;
    Ok((c1 / c2, j1 / j2))
}

fn convergence_check(s: &Settings, name: &str, family: &'static str, h: f64, dt: f64, t: f64) -> CheckReport {
    // Residual is 1/ratio so that a ratio of at least 3.5 passes.
    run_check(s, name, 1.0 / CONVERGENCE, 2, |_, _| {
        let fam = AnalyticFamily::by_name(family).ok_or_else(|| anyhow::anyhow!("unknown family {family}"))?;
        let (c, j) = convergence_ratios(fam, h, dt, t)?;
        Ok(Measured::new(1.0 / c.min(j))
            .with("family", family)
            .with("continuity_ratio", c)
            .with("hamilton_jacobi_ratio", j)
            .with("h", h)
            .with("dt", dt))
    })
}

pub fn run(s: &Settings) -> Vec<CheckReport> {
    let trials = s.trials("dynamics", 1000);
    vec![
        run_check(s, "dynamics.stationary_correspondence", 1e-12, trials, |rng, _| {
            // Shifting S by EΔt on the lattice is evolving χ = S/α.
            let family = AnalyticFamily::by_name("stationary").ok_or_else(|| anyhow::anyhow!("missing family"))?;
            let state = family.grid_state(X_MIN, 0.1, 161, 0.0)?;
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let alpha = rng.random_range(0.5..2.0);
                let e = rng.random_range(-5.0..5.0);
                let dt = rng.random_range(0.0..5.0);
                let chi: Vec<f64> = state.action().iter().map(|x| x / alpha).collect();
                let rep = PhaseRep::from_chi(state.probs().clone(), &chi, PhaseConstants::default())?;
                let evolved = evolve_stationary(&rep, &StationaryEvolution::new(e, alpha, 1.0)?, dt);
                let stepped = hj_stationary_step(&state, e, dt);
                for (x, phi) in stepped.action().iter().zip(evolved.phases()) {
                    let phi = phi.ok_or_else(|| anyhow::anyhow!("phase lost on a supported site"))?;
                    worst = worst.max(angle_distance(wrap_angle(x / alpha), phi));
                }
            }
            Ok(Measured::new(worst))
        }),
        convergence_check(s, "dynamics.free_particle_convergence", "free-expansion", 0.04, 0.02, 1.5),
        convergence_check(s, "dynamics.stationary_family_convergence", "stationary", 0.02, 0.01, 0.0),
        run_check(s, "dynamics.plane_wave_residual", 1e-9, 1, |_, _| {
            let fam = AnalyticFamily::by_name("plane-wave").ok_or_else(|| anyhow::anyhow!("missing family"))?;
            let (c, j) = family_residual(fam, 0.05, 0.01, 1.0)?;
            Ok(Measured::new(c.max(j)).with("continuity", c).with("hamilton_jacobi", j))
        }),
    ]
}
