use thiserror::Error;

use crate::rates::MeasureKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid class parameters: {0}")]
    InvalidParams(String),

    #[error("operation requires a strongly convex class (mu > 0)")]
    RequiresStrongConvexity,

    #[error("mu = L is excluded here; the interpolation conditions need mu < L")]
    DegenerateClass,

    #[error("no known bound for {init:?} -> {fin:?} at this step size")]
    NoKnownBound { init: MeasureKind, fin: MeasureKind },

    #[error("iteration count must be at least 1")]
    ZeroIterations,

    #[error("step size must be positive, got {0}")]
    NonPositiveStep(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the domain of h")]
    OutsideDomain,

    #[error("starting point is infeasible (F(x0) = +inf)")]
    InfeasibleStart,

    #[error("an initial subgradient s0 in the subdifferential of h at x0 is required")]
    MissingInitialSubgradient,

    #[error("no closed-form optimum for this problem: {0}")]
    NoClosedFormOptimum(String),

    #[error("problem has no known optimum")]
    UnknownOptimum,

    #[error("line search failed ({reason}); best step {best_step} with value {best_value}")]
    LineSearchFailure {
        reason: String,
        best_step: f64,
        best_value: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
