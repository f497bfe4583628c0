//! Gauge-invariant orthogonal maps and their complex factorisation.
//!
//! An orthogonal `M` on Q-space leaves result probabilities unchanged under a
//! global phase shift of the input exactly when every 2×2 block `M_[ki]` is a
//! scaled rotation `α R(φ)` or a scaled reflection-rotation `α R(φ) F`
//! (`F = diag(1, −1)`), with one block kind shared by all nonzero blocks. Such
//! an `M` acts on the complex form `v` as `v ↦ V v` (unitary) or `v ↦ V v*`
//! (antiunitary) with `V_ki = α_ki e^{iφ_ki}`. Conversely every unitary and
//! antiunitary map realifies to a gauge-invariant orthogonal map.
//!
//! Blocks are indexed from zero: block `(k, i)` occupies rows `2k, 2k + 1` and
//! columns `2i, 2i + 1`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;

use crate::linalg::{wrap_angle, ComplexMatrix, RealMatrix};
use crate::qspace::{from_complex, gauge_shift, result_probs, to_complex, PureState, QVector};
use crate::sampling::random_qvector;
use crate::{tol, Error, Result};

/// A `2N × 2N` real orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap {
    m: RealMatrix,
}

impl OrthogonalMap {
    /// Checks `‖MᵀM − I‖_F <` [`tol::ORTHOGONALITY`].
    pub fn new(m: RealMatrix) -> Result<Self> {
        Self::with_tolerance(m, tol::ORTHOGONALITY)
    }

    pub fn with_tolerance(m: RealMatrix, tolerance: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        if m.rows() == 0 {
            return Err(Error::Empty);
        }
        if !m.rows().is_multiple_of(2) {
            return Err(Error::OddLength(m.rows()));
        }
        let residual = m.orthogonality_residual();
        if !(residual < tolerance) {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self { m: RealMatrix::identity(2 * n) }
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.m
    }

    /// Number of results `N`; the matrix is `2N × 2N`.
    pub fn n(&self) -> usize {
        self.m.rows() / 2
    }

    /// `Q' = M Q`.
    pub fn apply(&self, q: &QVector) -> Result<QVector> {
        let out = self.m.mul_vec(q.as_slice())?;
        QVector::normalized(out)
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self { m: self.m.matmul(&other.m)? })
    }

    /// `Mᵀ = M⁻¹`.
    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    fn block(&self, k: usize, i: usize) -> [[f64; 2]; 2] {
        let m = &self.m;
        [[m[(2 * k, 2 * i)], m[(2 * k, 2 * i + 1)]], [m[(2 * k + 1, 2 * i)], m[(2 * k + 1, 2 * i + 1)]]]
    }
}

/// Orientation of a 2×2 block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// `α R(φ)`, `σ = +1`.
    Rotation,
    /// `α R(φ) F`, `σ = −1`.
    Reflection,
    /// Zero block; compatible with either kind.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub scale: f64,
    /// In `[0, 2π)`; absent for zero blocks.
    pub angle: Option<f64>,
    pub kind: BlockKind,
}

impl Block {
    pub fn reconstruct(&self) -> [[f64; 2]; 2] {
        let Some(angle) = self.angle else { return [[0.0; 2]; 2] };
        let (s, c) = angle.sin_cos();
        let a = self.scale;
        match self.kind {
            BlockKind::Rotation => [[a * c, -a * s], [a * s, a * c]],
            BlockKind::Reflection => [[a * c, a * s], [a * s, -a * c]],
            BlockKind::Zero => [[0.0; 2]; 2],
        }
    }

    /// `α e^{iφ}`.
    pub fn complex_entry(&self) -> Complex64 {
        self.angle.map_or(Complex64::new(0.0, 0.0), |phi| Complex64::from_polar(self.scale, phi))
    }
}

/// The `N × N` array of fitted blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    n: usize,
    blocks: Vec<Block>,
}

impl BlockDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block(&self, k: usize, i: usize) -> &Block {
        &self.blocks[k * self.n + i]
    }

    /// Shared kind of the nonzero blocks, or `Zero` if there are none.
    pub fn kind(&self) -> BlockKind {
        self.blocks.iter().map(|b| b.kind).find(|k| *k != BlockKind::Zero).unwrap_or(BlockKind::Zero)
    }

    /// `V_ki = α_ki e^{iφ_ki}`.
    pub fn complex_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |k, i| self.block(k, i).complex_entry())
    }
}

/// The first gauge-invariance condition an orthogonal map was found to break.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// `α_ki ≠ β_ki`: the block's columns have different lengths.
    UnequalColumnNorms { block: (usize, usize), alpha: f64, beta: f64 },
    /// `γ_ki ≠ 0`: the block's columns are not orthogonal.
    CorrelatedColumns { block: (usize, usize), gamma: f64 },
    /// The block passed both conditions but its fit residual exceeds tolerance.
    BlockMisfit { block: (usize, usize), residual: f64 },
    /// Two nonzero blocks of different kind.
    MixedBlockKinds { first: (usize, usize), conflicting: (usize, usize) },
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            Violation::UnequalColumnNorms { block, alpha, beta } => {
                write!(f, "block {block:?}: column norms differ (alpha={alpha:e}, beta={beta:e})")
            }
            Violation::CorrelatedColumns { block, gamma } => {
                write!(f, "block {block:?}: columns not orthogonal (gamma={gamma:e})")
            }
            Violation::BlockMisfit { block, residual } => write!(f, "block {block:?}: fit residual {residual:e}"),
            Violation::MixedBlockKinds { first, conflicting } => {
                write!(f, "blocks {first:?} and {conflicting:?} have different orientation")
            }
        }
    }
}

/// Fits every block as a scaled rotation or reflection-rotation.
///
/// A block is zero when `|det| < tol²`; otherwise its kind is the sign of its
/// determinant.
pub fn decompose(m: &OrthogonalMap, tol: f64) -> core::result::Result<BlockDecomposition, Violation> {
    let n = m.n();
    let mut blocks = Vec::with_capacity(n * n);
    let mut first_nonzero: Option<((usize, usize), BlockKind)> = None;
    for k in 0..n {
        for i in 0..n {
            let b = m.block(k, i);
            let alpha = b[0][0] * b[0][0] + b[1][0] * b[1][0];
            let beta = b[0][1] * b[0][1] + b[1][1] * b[1][1];
            let gamma = b[0][0] * b[0][1] + b[1][0] * b[1][1];
            if (alpha - beta).abs() > tol {
                return Err(Violation::UnequalColumnNorms { block: (k, i), alpha, beta });
            }
            if gamma.abs() > tol {
                return Err(Violation::CorrelatedColumns { block: (k, i), gamma });
            }
            let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
            let block = if det.abs() < tol * tol {
                Block { scale: 0.0, angle: None, kind: BlockKind::Zero }
            } else {
                let kind = if det > 0.0 { BlockKind::Rotation } else { BlockKind::Reflection };
                // Column one is α(cos φ, sin φ) for both kinds.
                let scale = ((alpha + beta) / 2.0).sqrt();
                let angle = wrap_angle(b[1][0].atan2(b[0][0]));
                Block { scale, angle: Some(angle), kind }
            };
            if block.kind != BlockKind::Zero {
                let r = block.reconstruct();
                let residual = (0..2)
                    .flat_map(|x| (0..2).map(move |y| (x, y)))
                    .map(|(x, y)| (r[x][y] - b[x][y]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if residual > tol {
                    return Err(Violation::BlockMisfit { block: (k, i), residual });
                }
                match first_nonzero {
                    None => first_nonzero = Some(((k, i), block.kind)),
                    Some((first, kind)) if kind != block.kind => {
                        return Err(Violation::MixedBlockKinds { first, conflicting: (k, i) });
                    }
                    Some(_) => {}
                }
            }
            blocks.push(block);
        }
    }
    Ok(BlockDecomposition { n, blocks })
}

/// A classified transformation.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeMap {
    /// `v ↦ V v`.
    Unitary(ComplexMatrix),
    /// `v ↦ V v*`.
    Antiunitary(ComplexMatrix),
    NotGaugeInvariant(Violation),
}

impl GaugeMap {
    pub fn identity(n: usize) -> Self {
        GaugeMap::Unitary(ComplexMatrix::identity(n))
    }

    /// Checks `V†V = I` before wrapping.
    pub fn unitary(v: ComplexMatrix) -> Result<Self> {
        check_unitary(&v)?;
        Ok(GaugeMap::Unitary(v))
    }

    pub fn antiunitary(v: ComplexMatrix) -> Result<Self> {
        check_unitary(&v)?;
        Ok(GaugeMap::Antiunitary(v))
    }

    /// The complex matrix `V`, if the map is gauge invariant.
    pub fn matrix(&self) -> Option<&ComplexMatrix> {
        match self {
            GaugeMap::Unitary(v) | GaugeMap::Antiunitary(v) => Some(v),
            GaugeMap::NotGaugeInvariant(_) => None,
        }
    }

    pub fn is_gauge_invariant(&self) -> bool {
        !matches!(self, GaugeMap::NotGaugeInvariant(_))
    }

    /// The equivalent orthogonal map on Q-space.
    pub fn realify(&self) -> Result<OrthogonalMap> {
        match self {
            GaugeMap::Unitary(v) => realify_unitary(v),
            GaugeMap::Antiunitary(v) => realify_antiunitary(v),
            GaugeMap::NotGaugeInvariant(_) => Err(Error::NotGaugeInvariant),
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        use GaugeMap::*;
        Ok(match (self, other) {
            (Unitary(a), Unitary(b)) => Unitary(a.matmul(b)?),
            (Unitary(a), Antiunitary(b)) => Antiunitary(a.matmul(b)?),
            // V₁ K V₂ v = V₁ V₂* v*
            (Antiunitary(a), Unitary(b)) => Antiunitary(a.matmul(&b.conj())?),
            (Antiunitary(a), Antiunitary(b)) => Unitary(a.matmul(&b.conj())?),
            _ => return Err(Error::NotGaugeInvariant),
        })
    }

    /// `V⁻¹ = V†` for unitary maps, `(VK)⁻¹ = Vᵀ K` for antiunitary ones.
    pub fn inverse(&self) -> Result<Self> {
        match self {
            GaugeMap::Unitary(v) => Ok(GaugeMap::Unitary(v.adjoint())),
            GaugeMap::Antiunitary(v) => Ok(GaugeMap::Antiunitary(v.transpose())),
            GaugeMap::NotGaugeInvariant(_) => Err(Error::NotGaugeInvariant),
        }
    }

    /// Largest entrywise difference between the matrices of two maps of the same
    /// variant; `None` when the variants differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        match (self, other) {
            (GaugeMap::Unitary(a), GaugeMap::Unitary(b)) | (GaugeMap::Antiunitary(a), GaugeMap::Antiunitary(b))
                if a.rows() == b.rows() =>
            {
                Some(a.max_abs_diff(b))
            }
            _ => None,
        }
    }
}

fn check_unitary(v: &ComplexMatrix) -> Result<()> {
    if !v.is_square() {
        return Err(Error::NotSquare { rows: v.rows(), cols: v.cols() });
    }
    let residual = v.unitarity_residual();
    if !(residual < tol::UNITARITY) {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Decides whether `m` respects global gauge invariance and, if so, returns the
/// unitary or antiunitary map it represents. `tol` bounds both the
/// orthogonality residual and every block fit.
pub fn classify(m: &OrthogonalMap, tol: f64) -> Result<GaugeMap> {
    let residual = m.matrix().orthogonality_residual();
    if !(residual < tol) {
        return Err(Error::NotOrthogonal { residual });
    }
    Ok(match decompose(m, tol) {
        Err(violation) => GaugeMap::NotGaugeInvariant(violation),
        Ok(d) => match d.kind() {
            BlockKind::Reflection => GaugeMap::Antiunitary(d.complex_matrix()),
            // An orthogonal matrix has no all-zero block row, so Zero only occurs for N = 0.
            BlockKind::Rotation | BlockKind::Zero => GaugeMap::Unitary(d.complex_matrix()),
        },
    })
}

/// Realification with blocks `α R(φ)` (or `α R(φ) F` when `reflect`), with no
/// unitarity check.
pub fn realify_blocks(v: &ComplexMatrix, reflect: bool) -> RealMatrix {
    RealMatrix::from_fn(2 * v.rows(), 2 * v.cols(), |r, c| {
        let z = v[(r / 2, c / 2)];
        match (r % 2, c % 2, reflect) {
            (0, 0, _) => z.re,
            (1, 0, _) => z.im,
            (0, 1, false) => -z.im,
            (1, 1, false) => z.re,
            (0, 1, true) => z.im,
            _ => -z.re,
        }
    })
}

/// `M_[ij] = α_ij R(φ_ij)` for `V_ij = α_ij e^{iφ_ij}`.
pub fn realify_unitary(v: &ComplexMatrix) -> Result<OrthogonalMap> {
    check_unitary(v)?;
    Ok(OrthogonalMap { m: realify_blocks(v, false) })
}

/// `M_[ij] = α_ij R(φ_ij) F`.
pub fn realify_antiunitary(v: &ComplexMatrix) -> Result<OrthogonalMap> {
    check_unitary(v)?;
    Ok(OrthogonalMap { m: realify_blocks(v, true) })
}

/// `v' = V v` or `v' = V v*`.
pub fn apply(g: &GaugeMap, v: &PureState) -> Result<PureState> {
    let (m, input) = match g {
        GaugeMap::Unitary(m) => (m, v.clone()),
        GaugeMap::Antiunitary(m) => (m, v.conj()),
        GaugeMap::NotGaugeInvariant(_) => return Err(Error::NotGaugeInvariant),
    };
    // Renormalise only if the matrix drifted off unitarity.
    let out = m.mul_vec(input.as_slice())?;
    PureState::new(out.clone()).or_else(|_| PureState::normalized(out))
}

/// Result of [`gauge_invariance_witness`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessOutcome {
    pub invariant: bool,
    /// Largest `|p_i(MQ) − p_i(MQ_shifted)|` observed.
    pub max_deviation: f64,
}

/// Probes gauge invariance directly by comparing the result probabilities of
/// `MQ` and `MQ'`, where `Q'` is `Q` with a constant added to every phase.
///
/// Structured probes come first: the basis states and the equal-weight pairs
/// `(e_i + e_j)/√2`, `(e_i + i·e_j)/√2`, each under a grid of global phases.
/// They expose every non-conformal block at close to full size. Then `trials`
/// random states are compared against one random shift each.
pub fn gauge_invariance_witness<R: Rng + ?Sized>(
    m: &OrthogonalMap,
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<WitnessOutcome> {
    let n = m.n();
    let mut max_deviation: f64 = 0.0;
    let mut spread = |shifts: &mut dyn Iterator<Item = QVector>| -> Result<()> {
        let (mut lo, mut hi) = (alloc::vec![f64::INFINITY; n], alloc::vec![f64::NEG_INFINITY; n]);
        for q in shifts {
            for (k, p) in result_probs(&m.apply(&q)?).as_slice().iter().enumerate() {
                lo[k] = lo[k].min(*p);
                hi[k] = hi[k].max(*p);
            }
        }
        for (l, h) in lo.iter().zip(&hi) {
            max_deviation = max_deviation.max(h - l);
        }
        Ok(())
    };
    for q in structured_probes(n)? {
        let c = to_complex(&q);
        spread(&mut (0..PHASE_GRID).map(|j| from_complex(&gauge_shift(&c, TAU * j as f64 / PHASE_GRID as f64))))?;
    }
    for _ in 0..trials {
        let q = random_qvector(n, rng);
        let shifted = from_complex(&gauge_shift(&to_complex(&q), rng.random::<f64>() * TAU));
        spread(&mut [q, shifted].into_iter())?;
    }
    Ok(WitnessOutcome { invariant: max_deviation < tol, max_deviation })
}

/// Global phases compared per structured probe.
const PHASE_GRID: usize = 8;

fn structured_probes(n: usize) -> Result<Vec<QVector>> {
    let unit = |entries: &[(usize, Complex64)]| {
        let mut v = alloc::vec![Complex64::new(0.0, 0.0); n];
        for &(k, z) in entries {
            v[k] = z;
        }
        PureState::normalized(v).map(|s| from_complex(&s))
    };
    let (one, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    let mut probes = Vec::with_capacity(n * n);
    for a in 0..n {
        probes.push(unit(&[(a, one)])?);
        for b in a + 1..n {
            probes.push(unit(&[(a, one), (b, one)])?);
            probes.push(unit(&[(a, one), (b, i)])?);
        }
    }
    Ok(probes)
}

/// `(‖MᵀM − I‖_F, ‖V†V − I‖_F)` with `M` the rotation-block realification of
/// `V`. Each block of `MᵀM − I` realifies one entry of `V†V − I`, so the first
/// residual is exactly `√2` times the second.
pub fn unitarity_orthogonality_bridge(v: &ComplexMatrix) -> (f64, f64) {
    let m = realify_blocks(v, false);
    (m.orthogonality_residual(), v.unitarity_residual())
}
