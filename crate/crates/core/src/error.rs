use thiserror::Error;

/// Errors surfaced by construction, solving and experiment preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point set must contain at least one point")]
    EmptyPointSet,

    #[error("duplicate point at indices {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("non-finite coordinate in point {index}")]
    NonFiniteCoordinate { index: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("radius must be positive, got {r}")]
    NonpositiveRadius { r: f64 },

    #[error("radius {r} exceeds skew(F)/2 = {bound}")]
    RadiusExceedsSkew { r: f64, bound: f64 },

    #[error("point set is not skew")]
    NotSkew,

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("matrix is numerically singular (pivot {pivot} at step {step})")]
    Singular { pivot: f64, step: usize },

    #[error("solve residual {residual} exceeds tolerance {tolerance}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("cross-system residual {residual} exceeds tolerance {tolerance}")]
    CrossResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("alpha limit consistency check failed: |sum - (m - mg)| = {defect}")]
    LimitInconsistency { defect: f64 },

    #[error("intervals must satisfy a_i <= b_i < a_(i+1): violated at index {index}")]
    InvalidIntervals { index: usize },

    #[error("invalid closed-form input: {reason}")]
    ClosedFormPrecondition { reason: &'static str },

    #[error("invalid radius schedule: {reason}")]
    InvalidSchedule { reason: String },

    #[error("determinant is not positive at r = {r}")]
    NonpositiveDeterminant { r: f64 },

    #[error("perturbation resampling failed {attempts} consecutive times")]
    ResamplingExhausted { attempts: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
