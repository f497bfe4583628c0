//! Numerical determination of the embedding functions `f`, `f̃`.
//!
//! With `F = f²` and `f² + f̃² = 1`, the measure induced on a phase `χ` by the
//! flat Q-space metric has density proportional to `F'(χ) / √(F(1 − F))`.
//! Requiring that density to be unchanged by `χ → χ + χ0` makes it a constant
//! `2a`, and the only solutions of `F' = ±2a√(F(1 − F))` are
//! `F = cos²(aχ + b)`. This module evaluates the density, tests it for
//! translation invariance, and integrates the ODE through its turning points.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{tol, Error, Result};

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// `F = f²` together with its derivative on a closed interval.
pub struct EmbeddingFunction {
    value: RealFn,
    derivative: RealFn,
    domain: (f64, f64),
}

impl core::fmt::Debug for EmbeddingFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("EmbeddingFunction").field("domain", &self.domain).finish_non_exhaustive()
    }
}

impl EmbeddingFunction {
    pub fn new(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
    ) -> Result<Self> {
        if !(domain.0 < domain.1) {
            return Err(Error::InvalidArgument("domain must be a nonempty interval"));
        }
        Ok(Self { value: Box::new(value), derivative: Box::new(derivative), domain })
    }

    /// `F(χ) = cos²(aχ + b)`, `F'(χ) = −a sin(2(aχ + b))`.
    pub fn cos_squared(a: f64, b: f64, domain: (f64, f64)) -> Result<Self> {
        Self::new(
            move |x| {
                let c = (a * x + b).cos();
                c * c
            },
            move |x| -a * (2.0 * (a * x + b)).sin(),
            domain,
        )
    }

    /// `F(χ) = χ²` on `[0.1, 0.9]`; its density `2/√(1 − χ²)` is not constant.
    pub fn quadratic() -> Self {
        Self { value: Box::new(|x| x * x), derivative: Box::new(|x| 2.0 * x), domain: (0.1, 0.9) }
    }

    /// `F(χ) = (1 + tanh χ)/2` on `[−1.5, 1.5]`; its density is `sech χ`.
    pub fn logistic() -> Self {
        Self {
            value: Box::new(|x| 0.5 * (1.0 + x.tanh())),
            derivative: Box::new(|x| {
                let c = x.cosh();
                0.5 / (c * c)
            }),
            domain: (-1.5, 1.5),
        }
    }

    /// Looks up `"cos-squared"` (with `a = 1, b = 0` on one period),
    /// `"quadratic"` or `"logistic"`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "cos-squared" => Self::cos_squared(1.0, 0.0, (0.0, core::f64::consts::PI)).ok(),
            "quadratic" => Some(Self::quadratic()),
            "logistic" => Some(Self::logistic()),
            _ => None,
        }
    }

    pub fn value(&self, chi: f64) -> f64 {
        (self.value)(chi)
    }

    pub fn derivative(&self, chi: f64) -> f64 {
        (self.derivative)(chi)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn contains(&self, chi: f64) -> bool {
        self.domain.0 <= chi && chi <= self.domain.1
    }

    /// Checks `0 ≤ F ≤ 1` on the grid and that `F'` agrees with a central
    /// difference of `F` within `1e-6` at grid points strictly inside the domain.
    pub fn validate(&self, grid: &[f64]) -> Result<()> {
        const H: f64 = 1e-5;
        for &x in grid {
            if !self.contains(x) {
                return Err(Error::OutsideDomain { at: x });
            }
            let value = self.value(x);
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Singularity { at: x, value });
            }
            if x - H > self.domain.0 && x + H < self.domain.1 {
                let fd = (self.value(x + H) - self.value(x - H)) / (2.0 * H);
                if (fd - self.derivative(x)).abs() > 1e-6 {
                    return Err(Error::InvalidArgument("derivative disagrees with central difference"));
                }
            }
        }
        Ok(())
    }
}

/// Unnormalised density `|F'(χ)| / √(F(1 − F))` of the measure induced on `χ`.
pub fn induced_measure_density(f: &EmbeddingFunction, chi: f64) -> Result<f64> {
    if !f.contains(chi) {
        return Err(Error::OutsideDomain { at: chi });
    }
    let value = f.value(chi);
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::Singularity { at: chi, value });
    }
    Ok(f.derivative(chi).abs() / (value * (1.0 - value)).sqrt())
}

/// Spread of the induced density over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySpread {
    pub min: f64,
    pub max: f64,
}

impl DensitySpread {
    /// `(max − min) / max`.
    pub fn relative_variation(&self) -> f64 {
        (self.max - self.min) / self.max
    }
}

/// Minimum and maximum of [`induced_measure_density`] over `grid`.
///
/// Fails on a singular grid point, and with [`Error::ConstantEmbedding`] when
/// the density vanishes identically (a constant `F`).
pub fn density_spread(f: &EmbeddingFunction, grid: &[f64]) -> Result<DensitySpread> {
    if grid.is_empty() {
        return Err(Error::Empty);
    }
    let mut spread = DensitySpread { min: f64::INFINITY, max: f64::NEG_INFINITY };
    for &chi in grid {
        let d = induced_measure_density(f, chi)?;
        spread.min = spread.min.min(d);
        spread.max = spread.max.max(d);
    }
    if spread.max == 0.0 {
        return Err(Error::ConstantEmbedding);
    }
    Ok(spread)
}

/// Whether the induced density is constant over `grid`: its relative variation
/// `(max − min)/max` must stay below `tol`.
pub fn is_translation_invariant(f: &EmbeddingFunction, grid: &[f64], tol: f64) -> Result<bool> {
    Ok(density_spread(f, grid)?.relative_variation() < tol)
}

/// Initial direction of `F` on the ODE `F' = ±2a√(F(1 − F))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Rising,
    Falling,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Rising => 1.0,
            Branch::Falling => -1.0,
        }
    }
}

/// Output of [`solve_f_ode`].
#[derive(Debug, Clone, PartialEq)]
pub struct FSolution {
    /// `F` at each grid point.
    pub values: Vec<f64>,
    /// Points where the solution hit `F ∈ {0, 1}` and the sign branch flipped.
    pub branch_switches: Vec<f64>,
    /// Largest `|F'² − 4a²F(1 − F)|` seen, i.e. drift off the first-order ODE.
    pub max_constraint_residual: f64,
}

/// RK4 integrator for `F' = ±2a√(F(1 − F))` from `(χ0, F0)`.
///
/// The first-order equation is not Lipschitz at `F ∈ {0, 1}`: started on a
/// boundary it never leaves it. The solver integrates the equivalent regular
/// system `F' = G`, `G' = 2a²(1 − 2F)` with `G(χ0) = ±2|a|√(F0(1 − F0))`,
/// where the sign of `G` is the branch. `G` passes through zero exactly at the
/// turning points, which is where the branch is switched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FOdeSolver {
    pub a: f64,
    pub step: f64,
}

impl FOdeSolver {
    pub fn new(a: f64, step: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::ZeroPhaseScale);
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidStep);
        }
        Ok(Self { a, step })
    }

    fn rhs(&self, (f, g): (f64, f64)) -> (f64, f64) {
        (g, 2.0 * self.a * self.a * (1.0 - 2.0 * f))
    }

    fn rk4(&self, y: (f64, f64), h: f64) -> (f64, f64) {
        let add = |y: (f64, f64), k: (f64, f64), s: f64| (y.0 + s * k.0, y.1 + s * k.1);
        let k1 = self.rhs(y);
        let k2 = self.rhs(add(y, k1, h / 2.0));
        let k3 = self.rhs(add(y, k2, h / 2.0));
        let k4 = self.rhs(add(y, k3, h));
        (
            y.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            y.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        )
    }

    fn constraint(&self, (f, g): (f64, f64)) -> f64 {
        (g * g - 4.0 * self.a * self.a * f * (1.0 - f)).abs()
    }

    /// Solves on an ascending `grid`; points on either side of `chi0` are reached
    /// by integrating forwards or backwards from the initial condition.
    pub fn solve(&self, f0: f64, chi0: f64, branch: Branch, grid: &[f64]) -> Result<FSolution> {
        if !(0.0..=1.0).contains(&f0) {
            return Err(Error::InvalidArgument("initial value must lie in [0, 1]"));
        }
        if let Some(index) = grid.windows(2).position(|w| !(w[0] <= w[1])) {
            return Err(Error::UnorderedGrid { index: index + 1 });
        }
        let g0 = branch.sign() * 2.0 * self.a.abs() * (f0 * (1.0 - f0)).sqrt();
        let start = (f0, g0);
        let mut values = alloc::vec![0.0; grid.len()];
        let mut switches = Vec::new();
        let mut residual: f64 = 0.0;

        let split = grid.partition_point(|&x| x < chi0);
        // Forward sweep over grid[split..], backward sweep over grid[..split].
        let sweeps: [(&mut dyn Iterator<Item = usize>, f64); 2] =
            [(&mut (split..grid.len()), 1.0), (&mut (0..split).rev(), -1.0)];
        for (indices, direction) in sweeps {
            let mut x = chi0;
            let mut y = start;
            for i in indices {
                let span = (grid[i] - x).abs();
                let steps = (span / self.step).ceil() as usize;
                if steps > 0 {
                    let h = direction * span / steps as f64;
                    for k in 0..steps {
                        let next = self.rk4(y, h);
                        if y.1 != 0.0 && next.1 != 0.0 && y.1.signum() != next.1.signum() {
                            switches.push(x + (k as f64 + 0.5) * h);
                        }
                        y = next;
                        residual = residual.max(self.constraint(y));
                    }
                }
                x = grid[i];
                values[i] = y.0;
            }
        }
        switches.sort_by(f64::total_cmp);
        Ok(FSolution { values, branch_switches: switches, max_constraint_residual: residual })
    }

    /// The `b` for which `cos²(aχ + b)` passes through `(χ0, F0)` on `branch`.
    pub fn closed_form_offset(&self, f0: f64, chi0: f64, branch: Branch) -> f64 {
        // d/dχ cos²(θ) = −a sin 2θ; θ0 = arccos √F0 ∈ [0, π/2] gives slope sign −sign(a).
        let theta = f0.sqrt().min(1.0).acos();
        let theta = if branch.sign() == -self.a.signum() { theta } else { -theta };
        theta - self.a * chi0
    }
}

/// Convenience wrapper: [`FOdeSolver::solve`] returning only the values.
pub fn solve_f_ode(a: f64, f0: f64, chi0: f64, branch: Branch, grid: &[f64], step: f64) -> Result<Vec<f64>> {
    Ok(FOdeSolver::new(a, step)?.solve(f0, chi0, branch, grid)?.values)
}

/// Whether `F` is within [`tol::TURNING_POINT`] of a turning point.
pub fn at_turning_point(f: f64) -> bool {
    f.abs() < tol::TURNING_POINT || (1.0 - f).abs() < tol::TURNING_POINT
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn density_of_cos_squared_is_two() {
        let f = EmbeddingFunction::cos_squared(1.0, 0.0, (0.0, FRAC_PI_2)).unwrap();
        // |−2 sin χ cos χ| / (|cos χ| |sin χ|) = 2.
        assert!((induced_measure_density(&f, PI / 5.0).unwrap() - 2.0).abs() < 1e-14);
        let f3 = EmbeddingFunction::cos_squared(3.0, 0.0, (0.0, PI)).unwrap();
        for &x in &[0.1, 0.3, 0.45, 1.2, 2.0] {
            assert!((induced_measure_density(&f3, x).unwrap() - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_of_square() {
        let f = EmbeddingFunction::new(|x| x * x, |x| 2.0 * x, (0.0, 1.0)).unwrap();
        let d = induced_measure_density(&f, 0.5).unwrap();
        assert!((d - 2.0 / 0.75f64.sqrt()).abs() < 1e-14);
        assert!((d - 2.309_401_076_758_503).abs() < 1e-12);
    }

    #[test]
    fn singular_points_are_errors() {
        let f = EmbeddingFunction::cos_squared(1.0, 0.0, (0.0, PI)).unwrap();
        assert!(matches!(induced_measure_density(&f, 0.0), Err(Error::Singularity { .. })));
        assert!(matches!(induced_measure_density(&f, 4.0), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn translation_invariance_verdicts() {
        let f = EmbeddingFunction::cos_squared(1.0, 0.3, (-0.3, PI - 0.3)).unwrap();
        let grid: Vec<f64> = linspace(-0.29, PI - 0.31, 200)
            .into_iter()
            .filter(|x| (x + 0.3 - FRAC_PI_2).abs() > 1e-3)
            .collect();
        assert!(is_translation_invariant(&f, &grid, 1e-9).unwrap());

        let sq = EmbeddingFunction::new(|x| x * x, |x| 2.0 * x, (0.1, 0.9)).unwrap();
        let spread = density_spread(&sq, &linspace(0.1, 0.9, 100)).unwrap();
        assert!(spread.relative_variation() > 0.2);
        assert!(!is_translation_invariant(&sq, &linspace(0.1, 0.9, 100), 1e-3).unwrap());

        let constant = EmbeddingFunction::new(|_| 0.5, |_| 0.0, (0.0, 1.0)).unwrap();
        assert!(matches!(is_translation_invariant(&constant, &[0.2, 0.5], 1e-3), Err(Error::ConstantEmbedding)));
    }

    #[test]
    fn named_families() {
        let q = EmbeddingFunction::by_name("quadratic").unwrap();
        let grid = linspace(0.1, 0.9, 1000);
        q.validate(&grid).unwrap();
        // 2/√(1 − χ²) spans [2/√0.99, 2/√0.19].
        let spread = density_spread(&q, &grid).unwrap();
        assert!((spread.min - 2.0 / 0.99f64.sqrt()).abs() < 1e-12);
        assert!((spread.max - 2.0 / 0.19f64.sqrt()).abs() < 1e-12);

        let l = EmbeddingFunction::by_name("logistic").unwrap();
        let grid = linspace(-1.5, 1.5, 1001);
        l.validate(&grid).unwrap();
        let spread = density_spread(&l, &grid).unwrap();
        assert!((spread.max - 1.0).abs() < 1e-12);
        assert!((spread.min - 1.0 / 1.5f64.cosh()).abs() < 1e-12);
        assert!(spread.relative_variation() > 0.1);

        assert!(EmbeddingFunction::by_name("cos-squared").is_some());
        assert!(EmbeddingFunction::by_name("sine").is_none());
    }

    #[test]
    fn validate_catches_bad_derivative() {
        let bad = EmbeddingFunction::new(|x| x * x, |x| 3.0 * x, (0.0, 1.0)).unwrap();
        assert!(bad.validate(&[0.5]).is_err());
        let good = EmbeddingFunction::cos_squared(2.0, 0.1, (0.0, 3.0)).unwrap();
        assert!(good.validate(&linspace(0.0, 3.0, 50)).is_ok());
        let out_of_range = EmbeddingFunction::new(|x| 2.0 * x, |_| 2.0, (0.0, 1.0)).unwrap();
        assert!(out_of_range.validate(&[0.9]).is_err());
    }

    #[test]
    fn ode_leaves_the_boundary() {
        let v = solve_f_ode(1.0, 1.0, 0.0, Branch::Falling, &[FRAC_PI_3], 1e-4).unwrap();
        assert!((v[0] - 0.25).abs() < 1e-12, "{}", v[0]);
    }

    #[test]
    fn ode_backward_to_turning_point() {
        let v = solve_f_ode(1.0, 0.5, FRAC_PI_4, Branch::Falling, &[0.0], 1e-4).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12, "{}", v[0]);
    }

    #[test]
    fn ode_switches_branch_at_turning_points() {
        let solver = FOdeSolver::new(1.0, 1e-3).unwrap();
        let grid = linspace(0.0, 2.0 * PI, 9);
        let sol = solver.solve(0.5, FRAC_PI_4, Branch::Falling, &grid).unwrap();
        // cos² χ turns at multiples of π/2.
        let expected = [FRAC_PI_2, PI, 1.5 * PI];
        assert!(sol.branch_switches.len() >= expected.len());
        for e in expected {
            assert!(sol.branch_switches.iter().any(|s| (s - e).abs() < 2e-3), "{:?}", sol.branch_switches);
        }
        assert!(sol.max_constraint_residual < 1e-10);
    }

    #[test]
    fn closed_form_offset_matches_initial_condition() {
        for &(a, f0, chi0) in &[(1.0, 0.3, 0.2), (-2.0, 0.7, 1.0), (0.5, 0.5, -1.0)] {
            let s = FOdeSolver::new(a, 1e-3).unwrap();
            for branch in [Branch::Rising, Branch::Falling] {
                let b = s.closed_form_offset(f0, chi0, branch);
                let th: f64 = a * chi0 + b;
                assert!((th.cos().powi(2) - f0).abs() < 1e-14);
                let slope = -a * (2.0 * th).sin();
                assert_eq!(slope > 0.0, branch == Branch::Rising);
            }
        }
    }

    #[test]
    fn solver_rejects_bad_input() {
        assert!(matches!(FOdeSolver::new(0.0, 1e-3), Err(Error::ZeroPhaseScale)));
        assert!(matches!(FOdeSolver::new(1.0, 0.0), Err(Error::InvalidStep)));
        let s = FOdeSolver::new(1.0, 1e-3).unwrap();
        assert!(s.solve(1.5, 0.0, Branch::Rising, &[0.0]).is_err());
        assert!(matches!(s.solve(0.5, 0.0, Branch::Rising, &[1.0, 0.0]), Err(Error::UnorderedGrid { index: 1 })));
        assert!(at_turning_point(1.0 - 1e-12) && !at_turning_point(0.5));
    }
}
