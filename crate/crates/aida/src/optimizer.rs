//! The Aida update rule.
//!
//! Aida tracks the first moment `m` of gradients and the second moment `r`
//! of the p-th power of gradient magnitudes, then moves each coordinate by
//! the sign of `m` scaled by `|m|^q` over a power of `r`. With
//! `(p, q) = (2, 1)` the rule is AdamW; with `mu = 0` on top it is Adam.
//!
//! Each step splits exactly into the update an autonomous (step-independent)
//! map would make plus a perturbation carrying the bias-correction
//! transient, which vanishes as `t` grows. The stability analysis in
//! [`crate::stability`] works on the autonomous part.

use crate::config::{AidaConfig, EpsMode};
use crate::error::{Error, Result, RunFailure};
use crate::problems::Problem;
use crate::trajectory::TrajectoryRecord;

/// Optimizer state after `t` completed steps; doubles as the
/// dynamical-system state `z = (m, r, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    /// Completed step count.
    pub t: usize,
    /// First moment of gradients.
    pub m: Vec<f64>,
    /// Second moment of `|g|^p`.
    pub r: Vec<f64>,
    /// Current iterate.
    pub x: Vec<f64>,
}

impl OptimizerState {
    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Per-step decomposition of the iterate update.
#[derive(Debug, Clone, PartialEq)]
pub struct StepBreakdown {
    /// `sign(m_{t+1})`, entries in {-1, 0, +1}.
    pub sign: Vec<f64>,
    /// Nonnegative magnitudes `|m_{t+1}|^q / D` with `D` per eps mode.
    pub magnitude: Vec<f64>,
    /// Bias-correction factor `(1 - beta2^(t+1))^(q/p) / (1 - beta1^(t+1))^q`.
    pub bias_factor: f64,
    /// The x-update the autonomous map would make (bias factor replaced by 1),
    /// including the weight-decay shrinkage.
    pub autonomous_delta: Vec<f64>,
    /// The transient contribution from bias correction; vanishes as t grows.
    pub perturbation_delta: Vec<f64>,
}

/// `|g|^p`, with integer fast paths and `0^p = 0` handled directly.
fn pow_abs(g: f64, p: f64) -> f64 {
    if p == 1.0 {
        g.abs()
    } else if p == 2.0 {
        g * g
    } else {
        let a = g.abs();
        if a == 0.0 {
            0.0
        } else {
            a.powf(p)
        }
    }
}

/// `base^e` for `base >= 0`, with half-integer fast paths.
fn pow_pos(base: f64, e: f64) -> f64 {
    if e == 0.5 {
        base.sqrt()
    } else if e == 1.0 {
        base
    } else if e == 2.0 {
        base * base
    } else {
        base.powf(e)
    }
}

fn signum0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn ensure_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFiniteInput { index }),
        None => Ok(()),
    }
}

/// Bias-correction factor at step `t` (zero-based completed-step count).
pub fn bias_factor(t: usize, cfg: &AidaConfig) -> f64 {
    let e = (t + 1).min(i32::MAX as usize) as i32;
    let num = pow_pos(1.0 - cfg.beta2.powi(e), cfg.q / cfg.p);
    let den = pow_pos(1.0 - cfg.beta1.powi(e), cfg.q);
    num / den
}

fn moment_updates(m: &[f64], r: &[f64], grad: &[f64], cfg: &AidaConfig) -> (Vec<f64>, Vec<f64>) {
    let m_new: Vec<f64> = m
        .iter()
        .zip(grad)
        .map(|(&mi, &gi)| cfg.beta1 * mi + (1.0 - cfg.beta1) * gi)
        .collect();
    let r_new: Vec<f64> = r
        .iter()
        .zip(grad)
        .map(|(&ri, &gi)| cfg.beta2 * ri + (1.0 - cfg.beta2) * pow_abs(gi, cfg.p))
        .collect();
    (m_new, r_new)
}

/// Sign and magnitude of the update direction for the new moments.
///
/// A zero denominator with a zero numerator yields magnitude 0 (the update
/// direction of a rest state); with a nonzero numerator it is an error.
fn sign_magnitude(m_new: &[f64], r_new: &[f64], cfg: &AidaConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let ratio = cfg.exponent_ratio();
    let mut sign = Vec::with_capacity(m_new.len());
    let mut magnitude = Vec::with_capacity(m_new.len());
    for (index, (&mi, &ri)) in m_new.iter().zip(r_new).enumerate() {
        let num = pow_abs(mi, cfg.q);
        let den = match cfg.eps_mode {
            EpsMode::InsidePower => pow_pos(ri + cfg.epsilon, ratio),
            EpsMode::OutsidePower => pow_pos(ri, ratio) + cfg.epsilon,
        };
        let mag = if den == 0.0 {
            if num == 0.0 {
                0.0
            } else {
                return Err(Error::ZeroDenominator { index });
            }
        } else {
            num / den
        };
        sign.push(signum0(mi));
        magnitude.push(mag);
    }
    Ok((sign, magnitude))
}

/// Creates a fresh state at `x0` with zero moments.
pub fn init_state(x0: &[f64]) -> Result<OptimizerState> {
    if x0.is_empty() {
        return Err(Error::EmptyInput);
    }
    ensure_finite(x0)?;
    Ok(OptimizerState {
        t: 0,
        m: vec![0.0; x0.len()],
        r: vec![0.0; x0.len()],
        x: x0.to_vec(),
    })
}

/// One Aida step for the supplied gradient.
pub fn step(
    state: &OptimizerState,
    grad: &[f64],
    cfg: &AidaConfig,
) -> Result<(OptimizerState, StepBreakdown)> {
    cfg.validate()?;
    if grad.len() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: grad.len(),
        });
    }
    ensure_finite(grad)?;

    let (m_new, r_new) = moment_updates(&state.m, &state.r, grad, cfg);
    let (sign, magnitude) = sign_magnitude(&m_new, &r_new, cfg)?;
    let bias = bias_factor(state.t, cfg);

    let eb = cfg.eta * bias;
    let ep = cfg.eta * (bias - 1.0);
    let n = state.dim();
    let mut x_new = Vec::with_capacity(n);
    let mut autonomous = Vec::with_capacity(n);
    let mut perturbation = Vec::with_capacity(n);
    for i in 0..n {
        let adaptive = eb * magnitude[i] * sign[i];
        x_new.push((1.0 - cfg.mu) * state.x[i] - adaptive);
        autonomous.push(-(cfg.mu * state.x[i]) - cfg.eta * magnitude[i] * sign[i]);
        perturbation.push(-(ep * magnitude[i] * sign[i]));
    }

    for (index, v) in m_new.iter().chain(&r_new).chain(&x_new).enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteUpdate { index: index % n });
        }
    }

    Ok((
        OptimizerState {
            t: state.t + 1,
            m: m_new,
            r: r_new,
            x: x_new,
        },
        StepBreakdown {
            sign,
            magnitude,
            bias_factor: bias,
            autonomous_delta: autonomous,
            perturbation_delta: perturbation,
        },
    ))
}

/// Image of `z = (m, r, x)` under the autonomous map (bias factor 1,
/// no step dependence). `grad` must be the gradient at `x`.
pub fn autonomous_image(
    m: &[f64],
    r: &[f64],
    x: &[f64],
    grad: &[f64],
    cfg: &AidaConfig,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    cfg.validate()?;
    let (m_new, r_new) = moment_updates(m, r, grad, cfg);
    let (sign, magnitude) = sign_magnitude(&m_new, &r_new, cfg)?;
    let x_new: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| (1.0 - cfg.mu) * xi - cfg.eta * magnitude[i] * sign[i])
        .collect();
    Ok((m_new, r_new, x_new))
}

/// Residuals of one autonomous step from `z = (0, 0, xstar)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    /// `max |g(xstar)|`.
    pub grad_inf_norm: f64,
    /// `max |m'|` of the mapped first-moment block.
    pub moment_image_norm: f64,
    /// `max |r'|` of the mapped second-moment block.
    pub second_moment_image_norm: f64,
    /// `max` over coordinates of the adaptive x-update term.
    pub adaptive_update_norm: f64,
    /// `max |mu * xstar|`: the weight-decay shrinkage, reported separately
    /// because for `mu > 0` a nonzero `xstar` is a fixed point only at 0.
    pub decay_shrinkage_norm: f64,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, &x| acc.max(x.abs()))
}

/// Evaluates the fixed-point residuals of `z = (0, 0, xstar)`.
pub fn fixed_point_report(
    xstar: &[f64],
    problem: &Problem,
    cfg: &AidaConfig,
) -> Result<FixedPointReport> {
    cfg.validate()?;
    if xstar.is_empty() {
        return Err(Error::EmptyInput);
    }
    ensure_finite(xstar)?;
    let grad = problem.gradient(xstar);
    ensure_finite(&grad)?;
    let zeros = vec![0.0; xstar.len()];
    let (m_new, r_new) = moment_updates(&zeros, &zeros, &grad, cfg);
    let (sign, magnitude) = sign_magnitude(&m_new, &r_new, cfg)?;
    let adaptive: Vec<f64> = magnitude
        .iter()
        .zip(&sign)
        .map(|(&mag, &s)| cfg.eta * mag * s)
        .collect();
    let shrink: Vec<f64> = xstar.iter().map(|&xi| cfg.mu * xi).collect();
    Ok(FixedPointReport {
        grad_inf_norm: inf_norm(&grad),
        moment_image_norm: inf_norm(&m_new),
        second_moment_image_norm: inf_norm(&r_new),
        adaptive_update_norm: inf_norm(&adaptive),
        decay_shrinkage_norm: inf_norm(&shrink),
    })
}

/// True when `xstar` is a fixed point of the autonomous dynamics within
/// `tol`: stationary gradient, both moment blocks mapping to zero and a
/// vanishing adaptive x-update. The `mu * xstar` shrinkage is excluded;
/// see [`FixedPointReport::decay_shrinkage_norm`].
pub fn check_fixed_point(
    xstar: &[f64],
    problem: &Problem,
    cfg: &AidaConfig,
    tol: f64,
) -> Result<bool> {
    let tol_ok = tol.is_finite() && tol > 0.0;
    if !tol_ok {
        return Err(Error::InvalidArgument("tol must be > 0".into()));
    }
    let report = fixed_point_report(xstar, problem, cfg)?;
    Ok(report.grad_inf_norm <= tol
        && report.moment_image_norm <= tol
        && report.second_moment_image_norm <= tol
        && report.adaptive_update_norm <= tol)
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

fn record_at(problem: &Problem, state: &OptimizerState, grad: &[f64]) -> TrajectoryRecord {
    TrajectoryRecord {
        step: state.t,
        f: problem.objective(&state.x),
        grad_norm: l2_norm(grad),
        dist_to_opt: problem.xstar.as_ref().map(|xs| {
            let diff: Vec<f64> = state.x.iter().zip(xs).map(|(&a, &b)| a - b).collect();
            l2_norm(&diff)
        }),
    }
}

/// Runs `steps` Aida iterations from the problem's initial point,
/// logging step 0, every `log_every`-th step and the final step.
///
/// Fully deterministic: identical inputs give bit-identical trajectories.
/// On a numeric failure the partial trajectory rides along in the error.
pub fn run(
    problem: &Problem,
    cfg: &AidaConfig,
    steps: usize,
    log_every: usize,
) -> std::result::Result<Vec<TrajectoryRecord>, RunFailure> {
    let fail = |step: usize, error: Error, partial: Vec<TrajectoryRecord>| RunFailure {
        step,
        error,
        partial,
    };
    if steps == 0 {
        return Err(fail(
            0,
            Error::InvalidArgument("steps must be >= 1".into()),
            vec![],
        ));
    }
    if log_every == 0 {
        return Err(fail(
            0,
            Error::InvalidArgument("log_every must be >= 1".into()),
            vec![],
        ));
    }

    let mut state = match init_state(&problem.x0) {
        Ok(s) => s,
        Err(e) => return Err(fail(0, e, vec![])),
    };
    let mut records = Vec::new();
    for s in 0..steps {
        let grad = problem.gradient(&state.x);
        if s % log_every == 0 {
            records.push(record_at(problem, &state, &grad));
        }
        match step(&state, &grad, cfg) {
            Ok((next, _)) => state = next,
            Err(e) => return Err(fail(s + 1, e, records)),
        }
    }
    let grad = problem.gradient(&state.x);
    records.push(record_at(problem, &state, &grad));
    Ok(records)
}
