//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the optimizer, the problem registry and the
/// stability analyzer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input vector was empty where a nonempty one is required.
    #[error("empty input")]
    EmptyInput,

    /// An input contained a NaN or infinite entry.
    #[error("non-finite input at index {index}")]
    NonFiniteInput { index: usize },

    /// Two vectors that must agree in length do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A hyperparameter is outside its valid range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A denominator component is exactly zero while the corresponding
    /// numerator is not (only possible with epsilon = 0).
    #[error("zero denominator at coordinate {index}")]
    ZeroDenominator { index: usize },

    /// An update overflowed to NaN or infinity.
    #[error("non-finite update at coordinate {index}")]
    NonFiniteUpdate { index: usize },

    /// Objective or gradient evaluation returned a non-finite value.
    #[error("non-finite evaluation")]
    NonFiniteEvaluation,

    /// Requested problem name is not registered.
    #[error("unknown problem: {0}")]
    UnknownProblem(String),

    /// A step size or tolerance that must be positive is not.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested (p, q, eps-mode) combination is outside the regimes
    /// covered by the closed-form Jacobian analysis.
    #[error("unsupported analysis regime: {0}")]
    UnsupportedRegime(String),

    /// A bisection bracket does not straddle the target.
    #[error("invalid bracket: {0}")]
    BracketError(String),

    /// An iterative solver hit its iteration cap.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Too few trajectory records for the requested analysis.
    #[error("insufficient records: need at least {needed}, got {got}")]
    InsufficientRecords { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

/// A failed optimization run: the failing step index, the underlying
/// error and every record logged before the failure.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("run failed at step {step}: {error}")]
pub struct RunFailure {
    pub step: usize,
    pub error: Error,
    pub partial: Vec<crate::trajectory::TrajectoryRecord>,
}
