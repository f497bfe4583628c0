//! Stationary evolution and the discretised Hamilton–Jacobi correspondence.
//!
//! A stationary state with energy `E` evolves as `χ_i ↦ χ_i − EΔt/α`, a global
//! phase change. On a 1-D lattice the pair `(P, S)` of a classical ensemble
//! obeys the continuity and Hamilton–Jacobi equations
//!
//! ```text
//! ∂P/∂t + ∂x(P ∂x S / m) = 0
//! ∂S/∂t + (∂x S)² / 2m + V = 0
//! ```
//!
//! and [`hj_residual`] measures how far a sequence of lattice states is from
//! satisfying them. Units: `E` energy, `α` and `S` action, `m` mass, `h`
//! length, `Δt` time. No unit checking is done.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::qspace::PhaseRep;
use crate::simplex::ProbVec;
use crate::{Error, Result};

/// Evolution of a stationary state with energy `e` in units where the phase
/// scale is `a` and the action constant is `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryEvolution {
    e: f64,
    alpha: f64,
    a: f64,
}

impl StationaryEvolution {
    pub fn new(e: f64, alpha: f64, a: f64) -> Result<Self> {
        if !e.is_finite() {
            return Err(Error::InvalidArgument("energy must be finite"));
        }
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidArgument("action constant must be finite and nonzero"));
        }
        if a == 0.0 || !a.is_finite() {
            return Err(Error::ZeroPhaseScale);
        }
        Ok(Self { e, alpha, a })
    }

    pub fn energy(&self) -> f64 {
        self.e
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `−a·E·Δt/α`, the change of every phase.
    pub fn phase_shift(&self, dt: f64) -> f64 {
        -self.a * self.e * dt / self.alpha
    }
}

/// `(p_i; φ_i) ↦ (p_i; φ_i − aEΔt/α)`. Probabilities are untouched.
pub fn evolve_stationary(rep: &PhaseRep, ev: &StationaryEvolution, dt: f64) -> PhaseRep {
    rep.shifted(ev.phase_shift(dt))
}

/// A classical ensemble sampled on the lattice `x_l = x0 + l·h`.
///
/// `p` holds site probabilities; `p_l / h` approximates the density.
#[derive(Debug, Clone, PartialEq)]
pub struct HJGridState {
    h: f64,
    x0: f64,
    p: ProbVec,
    s: Vec<f64>,
    m: f64,
    v: Vec<f64>,
}

impl HJGridState {
    pub fn new(h: f64, x0: f64, p: ProbVec, s: Vec<f64>, m: f64, v: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() || !x0.is_finite() {
            return Err(Error::InvalidStep);
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidArgument("mass must be positive"));
        }
        for other in [s.len(), v.len()] {
            if other != p.len() {
                return Err(Error::DimensionMismatch { expected: p.len(), found: other });
            }
        }
        if let Some(index) = s.iter().chain(&v).position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: index % p.len().max(1) });
        }
        Ok(Self { h, x0, p, s, m, v })
    }

    /// Zero potential.
    pub fn free(h: f64, x0: f64, p: ProbVec, s: Vec<f64>, m: f64) -> Result<Self> {
        let v = alloc::vec![0.0; p.len()];
        Self::new(h, x0, p, s, m, v)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn probs(&self) -> &ProbVec {
        &self.p
    }

    pub fn action(&self) -> &[f64] {
        &self.s
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn potential(&self) -> &[f64] {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn site(&self, l: usize) -> f64 {
        self.x0 + l as f64 * self.h
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.h == other.h && self.x0 == other.x0 && self.len() == other.len() && self.m == other.m
    }
}

/// Something that yields the lattice state at time `t`.
pub trait HJStateProvider {
    fn state_at(&self, t: f64) -> Result<HJGridState>;
}

impl<F> HJStateProvider for F
where
    F: Fn(f64) -> Result<HJGridState>,
{
    fn state_at(&self, t: f64) -> Result<HJGridState> {
        self(t)
    }
}

/// Max-norm residuals `(continuity, hamilton_jacobi)` at time `t`.
///
/// Central differences in `x` and in `t` (states at `t ± Δt`), interior sites
/// only. The potential is taken from the state at `t`.
pub fn hj_residual<P: HJStateProvider + ?Sized>(provider: &P, t: f64, dt: f64) -> Result<(f64, f64)> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidStep);
    }
    let before = provider.state_at(t - dt)?;
    let now = provider.state_at(t)?;
    let after = provider.state_at(t + dt)?;
    if !now.same_grid(&before) || !now.same_grid(&after) {
        return Err(Error::InvalidArgument("states use different lattices"));
    }
    let interior = now.len().saturating_sub(2);
    if interior < 3 {
        return Err(Error::GridTooSmall { interior });
    }
    let (h, m) = (now.h, now.m);
    let rho = |st: &HJGridState, l: usize| st.p.as_slice()[l] / h;
    let s = &now.s;
    let mut continuity: f64 = 0.0;
    let mut hj: f64 = 0.0;
    for l in 1..now.len() - 1 {
        let rho_t = (rho(&after, l) - rho(&before, l)) / (2.0 * dt);
        let rho_x = (rho(&now, l + 1) - rho(&now, l - 1)) / (2.0 * h);
        let s_x = (s[l + 1] - s[l - 1]) / (2.0 * h);
        let s_xx = (s[l + 1] - 2.0 * s[l] + s[l - 1]) / (h * h);
        let s_t = (after.s[l] - before.s[l]) / (2.0 * dt);
        continuity = continuity.max((rho_t + (rho_x * s_x + rho(&now, l) * s_xx) / m).abs());
        hj = hj.max((s_t + s_x * s_x / (2.0 * m) + now.v[l]).abs());
    }
    Ok((continuity, hj))
}

/// `(P, S) ↦ (P, S − EΔt)`. Only meaningful when `P` and the differences
/// `S_{l+1} − S_l` do not change in time; the caller is responsible for that.
pub fn hj_stationary_step(state: &HJGridState, e: f64, dt: f64) -> HJGridState {
    let mut next = state.clone();
    next.s.iter_mut().for_each(|s| *s -= e * dt);
    next
}

/// Closed-form solutions of the lattice equations, addressable by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticFamily {
    /// `P(x, t) = G(x/t)/t` with `G` a centred Gaussian of width `sigma`,
    /// `S = m x²/2t`, `V = 0`. Valid for `t > 0`.
    FreeExpansion { m: f64, sigma: f64 },
    /// `S = px − p²t/2m`, uniform `P`, `V = 0`.
    PlaneWave { m: f64, p: f64 },
    /// `S = px + ε sin(kx) − Et`, `P ∝ 1/∂x S`, `V = E − (∂x S)²/2m`.
    /// Requires `|εk| < |p|`.
    Stationary { m: f64, p: f64, eps: f64, k: f64, e: f64 },
}

/// Names accepted by [`AnalyticFamily::by_name`].
pub const FAMILY_NAMES: [&str; 3] = ["free-expansion", "plane-wave", "stationary"];

impl AnalyticFamily {
    /// A family with fixed representative parameters.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "free-expansion" => Some(Self::FreeExpansion { m: 1.0, sigma: 1.0 }),
            "plane-wave" => Some(Self::PlaneWave { m: 1.0, p: 0.7 }),
            "stationary" => Some(Self::Stationary { m: 1.0, p: 2.0, eps: 0.3, k: 1.5, e: 1.2 }),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::FreeExpansion { .. } => FAMILY_NAMES[0],
            Self::PlaneWave { .. } => FAMILY_NAMES[1],
            Self::Stationary { .. } => FAMILY_NAMES[2],
        }
    }

    /// Lattice state at time `t` on `sites` points starting at `x0`.
    pub fn grid_state(&self, x0: f64, h: f64, sites: usize, t: f64) -> Result<HJGridState> {
        if sites == 0 {
            return Err(Error::Empty);
        }
        let xs: Vec<f64> = (0..sites).map(|l| x0 + l as f64 * h).collect();
        match *self {
            Self::FreeExpansion { m, sigma } => {
                if !(t > 0.0) {
                    return Err(Error::OutsideDomain { at: t });
                }
                let w = sigma * t;
                let p = xs.iter().map(|x| (-(x * x) / (2.0 * w * w)).exp()).collect();
                let s = xs.iter().map(|x| m * x * x / (2.0 * t)).collect();
                HJGridState::free(h, x0, ProbVec::renormalized(p)?, s, m)
            }
            Self::PlaneWave { m, p } => {
                let s = xs.iter().map(|x| p * x - p * p * t / (2.0 * m)).collect();
                HJGridState::free(h, x0, ProbVec::uniform(sites)?, s, m)
            }
            Self::Stationary { m, p, eps, k, e } => {
                if !((eps * k).abs() < p.abs()) {
                    return Err(Error::InvalidArgument("stationary family needs |eps k| < |p|"));
                }
                let s_x: Vec<f64> = xs.iter().map(|x| p + eps * k * (k * x).cos()).collect();
                let s = xs.iter().map(|x| p * x + eps * (k * x).sin() - e * t).collect();
                let v = s_x.iter().map(|d| e - d * d / (2.0 * m)).collect();
                let dens = s_x.iter().map(|d| 1.0 / d.abs()).collect();
                HJGridState::new(h, x0, ProbVec::renormalized(dens)?, s, m, v)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, realify_unitary, GaugeMap};
    use crate::linalg::{angle_distance, wrap_angle, ComplexMatrix};
    use crate::qspace::{from_phase_rep, result_probs, PhaseConstants};
    use alloc::vec;
    use core::f64::consts::PI;
    use num_complex::Complex64;

    fn rep() -> PhaseRep {
        PhaseRep::new(
            ProbVec::new(vec![0.2, 0.0, 0.8]).unwrap(),
            vec![Some(0.5), None, Some(3.0)],
            PhaseConstants::default(),
        )
        .unwrap()
    }

    #[test]
    fn evolution_validation() {
        assert!(StationaryEvolution::new(1.0, 0.0, 1.0).is_err());
        assert!(StationaryEvolution::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn zero_energy_is_identity() {
        let ev = StationaryEvolution::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(evolve_stationary(&rep(), &ev, 3.0), rep());
    }

    #[test]
    fn half_period_shift() {
        let ev = StationaryEvolution::new(1.0, 1.0, 1.0).unwrap();
        let out = evolve_stationary(&rep(), &ev, PI);
        assert_eq!(out.probs(), rep().probs());
        assert!(angle_distance(out.phases()[0].unwrap(), 0.5 - PI) < 1e-15);
        assert!(angle_distance(out.phases()[2].unwrap(), 3.0 - PI) < 1e-15);
        assert_eq!(out.phases()[1], None);
        let before = result_probs(&from_phase_rep(&rep()));
        let after = result_probs(&from_phase_rep(&out));
        assert!(before.as_slice().iter().zip(after.as_slice()).all(|(x, y)| (x - y).abs() < 1e-15));
    }

    #[test]
    fn evolution_is_additive() {
        let ev = StationaryEvolution::new(0.8, 1.3, 2.0).unwrap();
        let twice = evolve_stationary(&evolve_stationary(&rep(), &ev, 0.4), &ev, 1.1);
        let once = evolve_stationary(&rep(), &ev, 1.5);
        for (x, y) in twice.phases().iter().zip(once.phases()) {
            assert_eq!(x.is_some(), y.is_some());
            if let (Some(x), Some(y)) = (x, y) {
                assert!(angle_distance(*x, *y) < 1e-13);
            }
        }
    }

    #[test]
    fn evolution_is_a_global_unitary() {
        let ev = StationaryEvolution::new(0.9, 1.0, 1.0).unwrap();
        let shift = Complex64::from_polar(1.0, ev.phase_shift(0.7));
        let u = ComplexMatrix::identity(3).scale(shift);
        let g = classify(&realify_unitary(&u).unwrap(), 1e-10).unwrap();
        assert!(matches!(g, GaugeMap::Unitary(_)));
    }

    #[test]
    fn stationary_step_matches_phase_evolution() {
        let alpha = 1.7;
        let state = AnalyticFamily::by_name("stationary").unwrap().grid_state(-3.0, 0.1, 61, 0.0).unwrap();
        let (e, dt) = (1.2, 0.37);
        let stepped = hj_stationary_step(&state, e, dt);
        let chi: Vec<f64> = state.action().iter().map(|s| s / alpha).collect();
        let rep = PhaseRep::from_chi(state.probs().clone(), &chi, PhaseConstants::default()).unwrap();
        let evolved = evolve_stationary(&rep, &StationaryEvolution::new(e, alpha, 1.0).unwrap(), dt);
        for (s, phi) in stepped.action().iter().zip(evolved.phases()) {
            assert!(angle_distance(wrap_angle(s / alpha), phi.unwrap()) < 1e-12);
        }
        assert_eq!(stepped.probs(), state.probs());
    }

    #[test]
    fn stationary_steps_compose() {
        let state = AnalyticFamily::by_name("plane-wave").unwrap().grid_state(0.0, 0.5, 8, 0.0).unwrap();
        assert_eq!(hj_stationary_step(&state, 0.0, 1.0), state);
        let two = hj_stationary_step(&hj_stationary_step(&state, 2.0, 0.25), 2.0, 0.25);
        let one = hj_stationary_step(&state, 2.0, 0.5);
        assert!(two.action().iter().zip(one.action()).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    fn family_residual(family: AnalyticFamily, h: f64, dt: f64, t: f64) -> (f64, f64) {
        let sites = (16.0 / h).round() as usize + 1;
        hj_residual(&|time: f64| family.grid_state(-8.0, h, sites, time), t, dt).unwrap()
    }

    #[test]
    fn plane_wave_residual_vanishes() {
        let (c, j) = family_residual(AnalyticFamily::by_name("plane-wave").unwrap(), 0.1, 0.01, 1.0);
        assert!(c < 1e-10 && j < 1e-10, "{c} {j}");
    }

    #[test]
    fn stationary_family_residual_is_discretisation_error() {
        let fam = AnalyticFamily::by_name("stationary").unwrap();
        let (c1, j1) = family_residual(fam, 0.02, 0.01, 0.0);
        let (c2, j2) = family_residual(fam, 0.01, 0.005, 0.0);
        assert!(c1 < 1e-3 && j1 < 1e-3);
        assert!(c1 / c2 > 3.5 && j1 / j2 > 3.5, "{c1} {c2} {j1} {j2}");
    }

    #[test]
    fn free_expansion_converges_at_second_order() {
        let fam = AnalyticFamily::by_name("free-expansion").unwrap();
        let (c1, j1) = family_residual(fam, 0.04, 0.02, 1.5);
        let (c2, j2) = family_residual(fam, 0.02, 0.01, 1.5);
        assert!(c1 / c2 > 3.5 && j1 / j2 > 3.5, "{c1} {c2} {j1} {j2}");
    }

    #[test]
    fn residual_errors() {
        let fam = AnalyticFamily::by_name("plane-wave").unwrap();
        let tiny = |t: f64| fam.grid_state(0.0, 0.1, 4, t);
        assert_eq!(hj_residual(&tiny, 1.0, 0.1), Err(Error::GridTooSmall { interior: 2 }));
        let ok = |t: f64| fam.grid_state(0.0, 0.1, 10, t);
        assert_eq!(hj_residual(&ok, 1.0, 0.0), Err(Error::InvalidStep));
        assert!(AnalyticFamily::by_name("nope").is_none());
        for name in FAMILY_NAMES {
            assert_eq!(AnalyticFamily::by_name(name).unwrap().name(), name);
        }
    }
}
