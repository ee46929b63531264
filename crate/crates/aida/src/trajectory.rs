//! Trajectory records and qualitative trend classification.

use crate::error::{Error, Result};

/// One logged row of an optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    /// Step index (strictly increasing within a run).
    pub step: usize,
    /// Objective value at the iterate.
    pub f: f64,
    /// Euclidean norm of the gradient at the iterate.
    pub grad_norm: f64,
    /// Euclidean distance to the known minimizer, when one exists.
    pub dist_to_opt: Option<f64>,
}

/// Qualitative verdict over a logged trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendClass {
    Converging,
    Plateau,
    Oscillating,
    Diverging,
}

impl std::fmt::Display for TrendClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TrendClass::Converging => "converging",
            TrendClass::Plateau => "plateau",
            TrendClass::Oscillating => "oscillating",
            TrendClass::Diverging => "diverging",
        };
        write!(f, "{s}")
    }
}

/// Distance series when every record carries one, else the gradient norms.
fn series(records: &[TrajectoryRecord]) -> Vec<f64> {
    if records.iter().all(|r| r.dist_to_opt.is_some()) {
        records.iter().map(|r| r.dist_to_opt.unwrap()).collect()
    } else {
        records.iter().map(|r| r.grad_norm).collect()
    }
}

/// Floor for log-domain work; distances can reach exactly zero.
fn clamped_ln(v: f64) -> f64 {
    v.max(1e-300).ln()
}

/// Least-squares slope of `ln(values)` against the step numbers.
fn log_slope(steps: &[usize], values: &[f64]) -> f64 {
    let n = steps.len() as f64;
    let mean_x = steps.iter().map(|&s| s as f64).sum::<f64>() / n;
    let mean_y = values.iter().map(|&v| clamped_ln(v)).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&s, &v) in steps.iter().zip(values) {
        let dx = s as f64 - mean_x;
        num += dx * (clamped_ln(v) - mean_y);
        den += dx * dx;
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Classifies a logged trajectory, ignoring the first `burn_in` records
/// for trend estimation.
///
/// The rules, applied in order on the distance series (falling back to
/// gradient norms when no minimizer is known), all scale-invariant:
///
/// 1. Converging: the post-burn-in log-trend slopes downward and the final
///    value is below half the value at burn-in; this compound test is what
///    "downward trend" means below.
/// 2. Diverging: the final value exceeds 10x the initial value.
/// 3. Oscillating: the post-burn-in peak-to-trough ratio exceeds 2 with no
///    downward trend (already implied here by rule 1 failing).
/// 4. Plateau otherwise.
pub fn classify_trajectory(records: &[TrajectoryRecord], burn_in: usize) -> Result<TrendClass> {
    if burn_in == 0 {
        return Err(Error::InvalidArgument("burn_in must be >= 1".into()));
    }
    if records.len() < 2 * burn_in {
        return Err(Error::InsufficientRecords {
            needed: 2 * burn_in,
            got: records.len(),
        });
    }
    let values = series(records);
    let steps: Vec<usize> = records.iter().map(|r| r.step).collect();

    let initial = values[0];
    let at_burn_in = values[burn_in];
    let last = *values.last().unwrap();
    let tail_steps = &steps[burn_in..];
    let tail = &values[burn_in..];
    let slope = log_slope(tail_steps, tail);

    if slope < 0.0 && last < 0.5 * at_burn_in {
        return Ok(TrendClass::Converging);
    }
    if last > 10.0 * initial {
        return Ok(TrendClass::Diverging);
    }
    let peak = tail.iter().fold(f64::MIN, |a, &b| a.max(b));
    let trough = tail.iter().fold(f64::MAX, |a, &b| a.min(b)).max(1e-300);
    if peak / trough > 2.0 {
        return Ok(TrendClass::Oscillating);
    }
    Ok(TrendClass::Plateau)
}

/// First step at which the gradient norm drops to `ratio` times its
/// initial value.
pub fn steps_to_grad_threshold(records: &[TrajectoryRecord], ratio: f64) -> Option<usize> {
    let target = records.first()?.grad_norm * ratio;
    records
        .iter()
        .find(|r| r.grad_norm <= target)
        .map(|r| r.step)
}

/// First step at which the distance to the optimum drops to `ratio` times
/// its initial value; `None` when the minimizer is unknown.
pub fn steps_to_dist_threshold(records: &[TrajectoryRecord], ratio: f64) -> Option<usize> {
    let target = records.first()?.dist_to_opt? * ratio;
    records
        .iter()
        .find(|r| r.dist_to_opt.is_some_and(|d| d <= target))
        .map(|r| r.step)
}

/// Smallest gradient norm over the run.
pub fn min_grad_norm(records: &[TrajectoryRecord]) -> f64 {
    records
        .iter()
        .map(|r| r.grad_norm)
        .fold(f64::INFINITY, f64::min)
}
