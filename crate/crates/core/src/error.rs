use thiserror::Error;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input")]
    Empty,

    #[error("entry {index} is not a finite number")]
    NonFinite { index: usize },

    #[error("entry {index} is negative ({value})")]
    NegativeProbability { index: usize, value: f64 },

    #[error("entries sum to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("displacement entries sum to {sum}, not 0")]
    NotTangent { sum: f64 },

    #[error("displacement is nonzero at zero-probability entry {index}")]
    SingularMetric { index: usize },

    #[error("infinite evidence: p[{index}] > 0 but p'[{index}] = 0")]
    InfiniteEvidence { index: usize },

    #[error("entry {index} lies outside [-1, 1] ({value})")]
    OutOfRange { index: usize, value: f64 },

    #[error("Q-space vector has odd length {0}")]
    OddLength(usize),

    #[error("phase constant a must be nonzero and finite")]
    ZeroPhaseScale,

    #[error("phase at index {index} must be present iff p > 0")]
    PhaseSupport { index: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("map is not gauge invariant and cannot act on states")]
    NotGaugeInvariant,

    #[error("basis is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("embedding function is singular at {at} (F = {value})")]
    Singularity { at: f64, value: f64 },

    #[error("embedding function is constant on the grid")]
    ConstantEmbedding,

    #[error("grid point {at} lies outside the domain")]
    OutsideDomain { at: f64 },

    #[error("grid is not ordered at position {index}")]
    UnorderedGrid { index: usize },

    #[error("step size must be positive and finite")]
    InvalidStep,

    #[error("grid has {interior} interior points, need at least 3")]
    GridTooSmall { interior: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
