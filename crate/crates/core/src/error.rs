use thiserror::Error;

/// Errors produced by the numerical routines and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("direction is not a unit vector (|theta| = {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("degenerate interval [{a}, {b}]")]
    DegenerateInterval { a: f64, b: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("grid too coarse: cell width {h} exceeds eps/10 = {limit}")]
    GridTooCoarse { h: f64, limit: f64 },

    #[error("density is negative on [{a}, {b}]")]
    NegativeDensity { a: f64, b: f64 },

    #[error("density is not normalized (mass = {mass})")]
    Unnormalized { mass: f64 },

    #[error("density must be piecewise constant")]
    NotPiecewiseConstant,

    #[error("phase is constant on the support")]
    ConstantPhase,

    #[error("grid point {s} lies within the exclusion zone of critical value {critical}")]
    CriticalValue { s: f64, critical: f64 },

    #[error("degenerate sample range [{min}, {max}]")]
    DegenerateRange { min: f64, max: f64 },

    #[error("points are not distinct (gap {gap} below {limit})")]
    CoincidentPoints { gap: f64, limit: f64 },

    #[error("set has zero measure")]
    NullSet,

    #[error("density failed the midpoint log-concavity check at ({x}, {y})")]
    NotLogConcave { x: f64, y: f64 },

    #[error("rejection acceptance {acceptance:e} below 1e-6")]
    BodyTooThin { acceptance: f64 },

    #[error("tensor quadrature supports dimension <= 3, got {0}")]
    TensorDimension(usize),

    #[error("too few points for a fit: {got} (need {need})")]
    InsufficientPoints { got: usize, need: usize },

    #[error("all values are below the noise floor {floor:e}")]
    BelowNoiseFloor { floor: f64 },

    #[error("vanishing L2 norm")]
    VanishingNorm,

    #[error("empty input")]
    EmptyInput,

    #[error("non-positive shape value {0}")]
    NonPositiveShape(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
