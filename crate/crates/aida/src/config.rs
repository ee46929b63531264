//! Optimizer hyperparameters.

use crate::error::{Error, Result};

/// Where the numerical-stability offset enters the update denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsMode {
    /// Denominator `(r + eps)^(q/p)`.
    InsidePower,
    /// Denominator `r^(q/p) + eps`.
    OutsidePower,
}

impl std::fmt::Display for EpsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EpsMode::InsidePower => write!(f, "inside"),
            EpsMode::OutsidePower => write!(f, "outside"),
        }
    }
}

/// Full hyperparameter set of the Aida update rule.
///
/// With `(p, q) = (2, 1)` the update is algebraically identical to AdamW
/// (and to Adam when additionally `mu = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AidaConfig {
    /// First-moment averaging coefficient, in (0, 1).
    pub beta1: f64,
    /// Second-moment averaging coefficient, in (0, 1).
    pub beta2: f64,
    /// Common learning rate, > 0.
    pub eta: f64,
    /// Numerical-stability offset, >= 0.
    pub epsilon: f64,
    /// Decoupled weight decay, in [0, 1).
    pub mu: f64,
    /// Power of the gradient magnitude tracked by the second moment, >= 1.
    pub p: f64,
    /// Magnitude exponent of the update, >= 1.
    pub q: f64,
    /// Placement of epsilon in the denominator.
    pub eps_mode: EpsMode,
}

impl Default for AidaConfig {
    fn default() -> Self {
        AidaConfig {
            beta1: 0.9,
            beta2: 0.999,
            eta: 1e-3,
            epsilon: 1e-8,
            mu: 0.0,
            p: 2.0,
            q: 1.0,
            eps_mode: EpsMode::InsidePower,
        }
    }
}

impl AidaConfig {
    /// Checks every hyperparameter range.
    ///
    /// With `eps_mode = OutsidePower` and `epsilon = 0` the exponent ratio
    /// must satisfy `q/p >= 1`, otherwise `r^(q/p)` is not differentiable
    /// at `r = 0`.
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidConfig(msg.to_string()))
            }
        };
        check(
            self.beta1.is_finite() && self.beta1 > 0.0 && self.beta1 < 1.0,
            "beta1 must lie in (0, 1)",
        )?;
        check(
            self.beta2.is_finite() && self.beta2 > 0.0 && self.beta2 < 1.0,
            "beta2 must lie in (0, 1)",
        )?;
        check(self.eta.is_finite() && self.eta > 0.0, "eta must be > 0")?;
        check(
            self.epsilon.is_finite() && self.epsilon >= 0.0,
            "epsilon must be >= 0",
        )?;
        check(
            self.mu.is_finite() && (0.0..1.0).contains(&self.mu),
            "mu must lie in [0, 1)",
        )?;
        check(self.p.is_finite() && self.p >= 1.0, "p must be >= 1")?;
        check(self.q.is_finite() && self.q >= 1.0, "q must be >= 1")?;
        if self.eps_mode == EpsMode::OutsidePower && self.epsilon == 0.0 {
            check(
                self.q / self.p >= 1.0,
                "eps_mode = outside with epsilon = 0 requires q/p >= 1",
            )?;
        }
        Ok(())
    }

    /// Exponent applied to the second moment in the denominator.
    pub fn exponent_ratio(&self) -> f64 {
        self.q / self.p
    }

    /// True when the update reduces to AdamW's.
    pub fn is_adamw(&self) -> bool {
        self.p == 2.0 && self.q == 1.0
    }
}
