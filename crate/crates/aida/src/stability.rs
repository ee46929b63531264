//! Local stability analysis of the autonomous optimizer dynamics at a
//! fixed point `z* = (0, 0, x*)`.
//!
//! After diagonalizing the Hessian at the optimum, the Jacobian of the
//! autonomous map splits into one 3x3 block per Hessian eigenvalue
//! `gamma`. For `(p, q) = (2, 1)` the block couples the first moment and
//! the iterate through `eta / sqrt(eps)`; for `q > 1` it is upper
//! triangular with spectrum `{beta1, beta2, 1 - mu}` independent of
//! `gamma`, `eta` and `eps`. Fixed-point stability follows from the
//! spectral radius: below 1 stable, above 1 unstable, and undefined on
//! the unit circle (there the linearization is silent, which is exactly
//! the `mu = 0` situation for `q > 1`).

use crate::config::{AidaConfig, EpsMode};
use crate::error::{Error, Result};
use crate::linalg;
use num_complex::Complex64;

/// Eigenvalues of the Hessian at the optimum; all strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianSpectrum {
    gammas: Vec<f64>,
}

impl HessianSpectrum {
    pub fn new(gammas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "hessian eigenvalues must be positive and finite, got {bad}"
            )));
        }
        Ok(HessianSpectrum { gammas })
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn max_gamma(&self) -> f64 {
        self.gammas.iter().fold(f64::MIN, |a, &b| a.max(b))
    }
}

/// Stability verdict at the fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
    /// Spectral radius on the unit circle within tolerance: the
    /// linearization does not decide.
    Undefined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Undefined => "undefined",
        };
        write!(f, "{s}")
    }
}

/// Margin around `|lambda| = 1` inside which the verdict is `Undefined`.
pub const VERDICT_TOL_EDGE: f64 = 1e-12;

/// Outcome of the sufficient condition checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Full analysis output at a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// `eta * gamma_i / sqrt(eps)` per Hessian eigenvalue (empty when
    /// `eps = 0`).
    pub phis: Vec<f64>,
    /// All `3n` Jacobian eigenvalues.
    pub lambdas: Vec<Complex64>,
    /// Spectral radius.
    pub rho: f64,
    /// Sufficient condition for the `(2, 1)` regime, when applicable.
    pub cond_adamw_holds: Option<bool>,
    /// Weight-decay condition for the `q > 1` regime, when applicable.
    pub cond_aida_holds: Option<bool>,
    pub verdict: Verdict,
}

/// Gate for the regimes the closed-form analysis covers.
fn check_regime(cfg: &AidaConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.q == 1.0 {
        if cfg.p != 2.0 {
            return Err(Error::UnsupportedRegime(format!(
                "q = 1 analysis covers p = 2 only, got p = {}",
                cfg.p
            )));
        }
        if cfg.eps_mode == EpsMode::OutsidePower {
            return Err(Error::UnsupportedRegime(
                "(p, q) = (2, 1) with eps outside the power is not differentiable at r = 0".into(),
            ));
        }
        if cfg.epsilon <= 0.0 {
            return Err(Error::UnsupportedRegime(
                "(p, q) = (2, 1) analysis requires eps > 0".into(),
            ));
        }
    } else {
        match cfg.eps_mode {
            EpsMode::InsidePower => {
                if cfg.p == 1.0 {
                    return Err(Error::UnsupportedRegime(
                        "q > 1 with p = 1 and eps inside the power leaves the second-moment \
                         derivative undefined at the fixed point"
                            .into(),
                    ));
                }
            }
            EpsMode::OutsidePower => {
                if cfg.exponent_ratio() < 1.0 {
                    return Err(Error::UnsupportedRegime(
                        "eps outside the power requires q/p >= 1".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// The per-Hessian-eigenvalue 3x3 block of the Jacobian at the fixed point,
/// in `(m, r, x)` coordinates.
pub fn jacobian_block(gamma: f64, cfg: &AidaConfig) -> Result<[[f64; 3]; 3]> {
    check_regime(cfg)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be positive and finite, got {gamma}"
        )));
    }
    let b1 = cfg.beta1;
    let b2 = cfg.beta2;
    if cfg.q == 1.0 {
        let se = cfg.epsilon.sqrt();
        Ok([
            [b1, 0.0, (1.0 - b1) * gamma],
            [0.0, b2, 0.0],
            [
                -cfg.eta * b1 / se,
                0.0,
                (1.0 - cfg.mu) - cfg.eta * (1.0 - b1) * gamma / se,
            ],
        ])
    } else {
        Ok([
            [b1, 0.0, (1.0 - b1) * gamma],
            [0.0, b2, 0.0],
            [0.0, 0.0, 1.0 - cfg.mu],
        ])
    }
}

/// The quadratic-root eigenvalue pair of the `(2, 1)` block as a function
/// of `phi = eta * gamma / sqrt(eps)`; complex when the discriminant is
/// negative. The third block eigenvalue is always `beta2`.
pub fn adamw_eigs_from_phi(beta1: f64, mu: f64, phi: f64) -> (Complex64, Complex64) {
    let t = 1.0 - mu + beta1 - phi * (1.0 - beta1);
    let disc = t * t - 4.0 * beta1 * (1.0 - mu);
    if disc >= 0.0 {
        let z = disc.sqrt();
        (
            Complex64::new(0.5 * (t + z), 0.0),
            Complex64::new(0.5 * (t - z), 0.0),
        )
    } else {
        let z = (-disc).sqrt();
        (
            Complex64::new(0.5 * t, 0.5 * z),
            Complex64::new(0.5 * t, -0.5 * z),
        )
    }
}

/// Closed-form eigenvalues of the `(2, 1)` block for one Hessian
/// eigenvalue `gamma`.
pub fn eigs_closed_form_adamw(gamma: f64, cfg: &AidaConfig) -> Result<[Complex64; 3]> {
    check_regime(cfg)?;
    if cfg.q != 1.0 {
        return Err(Error::UnsupportedRegime(
            "closed-form AdamW eigenvalues require (p, q) = (2, 1)".into(),
        ));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be positive and finite, got {gamma}"
        )));
    }
    let phi = cfg.eta * gamma / cfg.epsilon.sqrt();
    let (l2, l3) = adamw_eigs_from_phi(cfg.beta1, cfg.mu, phi);
    Ok([Complex64::new(cfg.beta2, 0.0), l2, l3])
}

/// Closed-form eigenvalues for any `q > 1` regime: `(beta1, beta2, 1 - mu)`,
/// independent of `gamma`, `eta` and `eps`.
pub fn eigs_closed_form_aida(cfg: &AidaConfig) -> Result<[f64; 3]> {
    check_regime(cfg)?;
    if cfg.q <= 1.0 {
        return Err(Error::UnsupportedRegime(
            "closed-form Aida eigenvalues require q > 1".into(),
        ));
    }
    Ok([cfg.beta1, cfg.beta2, 1.0 - cfg.mu])
}

/// Sufficient condition for spectral radius < 1 in the `(2, 1)` regime:
/// `eta * max(gamma) * (1 - beta1) / sqrt(eps) < 2 beta1 + 2 (1 - mu)`.
pub fn check_condition_adamw(
    spectrum: &HessianSpectrum,
    cfg: &AidaConfig,
) -> Result<ConditionCheck> {
    check_regime(cfg)?;
    if cfg.q != 1.0 {
        return Err(Error::UnsupportedRegime(
            "the AdamW condition applies to (p, q) = (2, 1)".into(),
        ));
    }
    let lhs = cfg.eta * spectrum.max_gamma() * (1.0 - cfg.beta1) / cfg.epsilon.sqrt();
    let rhs = 2.0 * cfg.beta1 + 2.0 * (1.0 - cfg.mu);
    Ok(ConditionCheck {
        holds: lhs < rhs,
        lhs,
        rhs,
    })
}

/// Stability condition for `q > 1`: nonzero weight decay, `0 < mu < 1`.
pub fn check_condition_aida(cfg: &AidaConfig) -> Result<bool> {
    if cfg.q <= 1.0 {
        return Err(Error::UnsupportedRegime(
            "the weight-decay condition applies to q > 1".into(),
        ));
    }
    Ok(cfg.mu > 0.0 && cfg.mu < 1.0)
}

fn block_to_vec(b: &[[f64; 3]; 3]) -> Vec<Vec<f64>> {
    b.iter().map(|row| row.to_vec()).collect()
}

/// Numeric spectral radius over every per-eigenvalue block.
pub fn spectral_radius_numeric(spectrum: &HessianSpectrum, cfg: &AidaConfig) -> Result<f64> {
    let mut rho = 0.0f64;
    for &gamma in spectrum.gammas() {
        let block = jacobian_block(gamma, cfg)?;
        for lambda in linalg::eigs_numeric(&block_to_vec(&block))? {
            rho = rho.max(lambda.norm());
        }
    }
    Ok(rho)
}

/// Assembles the full `3n x 3n` Jacobian at the fixed point in the
/// Hessian eigenbasis, blocks ordered `(m, r, x)`.
pub fn assemble_jacobian(spectrum: &HessianSpectrum, cfg: &AidaConfig) -> Result<Vec<Vec<f64>>> {
    let n = spectrum.gammas().len();
    let mut j = vec![vec![0.0; 3 * n]; 3 * n];
    for (i, &gamma) in spectrum.gammas().iter().enumerate() {
        let b = jacobian_block(gamma, cfg)?;
        j[i][i] = b[0][0];
        j[i][2 * n + i] = b[0][2];
        j[n + i][n + i] = b[1][1];
        j[2 * n + i][i] = b[2][0];
        j[2 * n + i][2 * n + i] = b[2][2];
    }
    Ok(j)
}

fn verdict_from_rho(rho: f64) -> Verdict {
    if rho < 1.0 - VERDICT_TOL_EDGE {
        Verdict::Stable
    } else if rho > 1.0 + VERDICT_TOL_EDGE {
        Verdict::Unstable
    } else {
        Verdict::Undefined
    }
}

/// Evaluates the closed-form spectrum, the sufficient conditions and the
/// verdict for the given Hessian spectrum.
pub fn analyze(spectrum: &HessianSpectrum, cfg: &AidaConfig) -> Result<StabilityReport> {
    check_regime(cfg)?;
    let phis = if cfg.epsilon > 0.0 {
        spectrum
            .gammas()
            .iter()
            .map(|&g| cfg.eta * g / cfg.epsilon.sqrt())
            .collect()
    } else {
        Vec::new()
    };

    let mut lambdas = Vec::with_capacity(3 * spectrum.gammas().len());
    if cfg.q == 1.0 {
        for &gamma in spectrum.gammas() {
            lambdas.extend(eigs_closed_form_adamw(gamma, cfg)?);
        }
    } else {
        let eigs = eigs_closed_form_aida(cfg)?;
        for _ in spectrum.gammas() {
            lambdas.extend(eigs.iter().map(|&v| Complex64::new(v, 0.0)));
        }
    }
    let rho = lambdas.iter().fold(0.0f64, |a, l| a.max(l.norm()));

    let cond_adamw_holds = if cfg.q == 1.0 {
        Some(check_condition_adamw(spectrum, cfg)?.holds)
    } else {
        None
    };
    let cond_aida_holds = if cfg.q > 1.0 {
        Some(check_condition_aida(cfg)?)
    } else {
        None
    };

    Ok(StabilityReport {
        phis,
        lambdas,
        rho,
        cond_adamw_holds,
        cond_aida_holds,
        verdict: verdict_from_rho(rho),
    })
}

/// Bisection on `eta` for the spectral-radius crossing `rho = 1`, using
/// the numeric block eigenvalues. The bracket must satisfy
/// `rho(eta_lo) < 1 < rho(eta_hi)`.
pub fn stability_boundary_eta(
    spectrum: &HessianSpectrum,
    cfg: &AidaConfig,
    eta_lo: f64,
    eta_hi: f64,
) -> Result<f64> {
    if cfg.q != 1.0 {
        // For q > 1 the spectrum does not depend on eta at all.
        return Err(Error::UnsupportedRegime(
            "the eta boundary search applies to (p, q) = (2, 1)".into(),
        ));
    }
    if !(eta_lo > 0.0 && eta_hi > eta_lo) {
        return Err(Error::BracketError(format!(
            "need 0 < eta_lo < eta_hi, got [{eta_lo}, {eta_hi}]"
        )));
    }
    let rho_at = |eta: f64| -> Result<f64> {
        spectral_radius_numeric(spectrum, &AidaConfig { eta, ..*cfg })
    };
    let rho_lo = rho_at(eta_lo)?;
    let rho_hi = rho_at(eta_hi)?;
    if !(rho_lo < 1.0 && rho_hi > 1.0) {
        return Err(Error::BracketError(format!(
            "bracket does not straddle rho = 1: rho({eta_lo:e}) = {rho_lo}, rho({eta_hi:e}) = {rho_hi}"
        )));
    }
    let (mut lo, mut hi) = (eta_lo, eta_hi);
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        let rho = rho_at(mid)?;
        if (rho - 1.0).abs() <= 1e-9 {
            return Ok(mid);
        }
        if rho < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(
        "eta bisection did not reach |rho - 1| <= 1e-9".into(),
    ))
}

/// Analytic `(2, 1)` boundary where the sufficient condition becomes an
/// equality: `eta* = sqrt(eps) (2 beta1 + 2 (1 - mu)) / ((1 - beta1) max gamma)`.
pub fn analytic_boundary_eta(spectrum: &HessianSpectrum, cfg: &AidaConfig) -> f64 {
    cfg.epsilon.sqrt() * (2.0 * cfg.beta1 + 2.0 * (1.0 - cfg.mu))
        / ((1.0 - cfg.beta1) * spectrum.max_gamma())
}
