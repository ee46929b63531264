//! Aida: an adaptive optimizer generalizing AdamW with two exponents
//! `(p, q)`, plus the machinery to study it.
//!
//! The crate has four parts:
//!
//! - [`optimizer`]: the update rule itself, with bias correction, both
//!   epsilon placements, and the exact split of each step into an
//!   autonomous part and a vanishing bias-correction perturbation.
//! - [`problems`]: ten classic 100-dimensional test functions and the
//!   scalar quadratic probe, each with analytic gradients validated
//!   against finite differences.
//! - [`stability`]: the Jacobian of the autonomous dynamics at a fixed
//!   point, closed-form and numeric eigenvalues, stability conditions and
//!   the learning-rate stability boundary.
//! - [`trajectory`]: run logging and qualitative trend classification.
//!
//! Everything is deterministic; there is no randomness anywhere.

pub mod config;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod problems;
pub mod stability;
pub mod trajectory;

pub use config::{AidaConfig, EpsMode};
pub use error::{Error, Result, RunFailure};
pub use num_complex::Complex64;
pub use optimizer::{check_fixed_point, init_state, run, step, OptimizerState, StepBreakdown};
pub use problems::{get_problem, Problem};
pub use stability::{HessianSpectrum, StabilityReport, Verdict};
pub use trajectory::{classify_trajectory, TrajectoryRecord, TrendClass};
