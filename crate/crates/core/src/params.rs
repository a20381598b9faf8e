//! Algorithmic constants for the outer and inner loops.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the outer interior-point loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OuterParams {
    /// Primal (complementarity) tolerance `ε_p`.
    pub eps_p: f64,
    /// Dual tolerance `ε_d`.
    pub eps_d: f64,
    /// First inner tolerance `ε_0`.
    pub eps0: f64,
    /// First barrier weight `μ_0`.
    pub mu0: f64,
    /// Inner tolerance reduction factor `θ_ε ∈ (0, 1)`.
    pub theta_eps: f64,
    /// Barrier weight reduction factor `θ_μ ∈ (0, 1)`.
    pub theta_mu: f64,
    pub max_outer_iters: usize,
}

impl Default for OuterParams {
    fn default() -> Self {
        OuterParams {
            eps_p: 1e-5,
            eps_d: 1e-5,
            eps0: 1.0,
            mu0: 1.0,
            theta_eps: 0.25,
            theta_mu: 0.25,
            max_outer_iters: 200,
        }
    }
}

impl OuterParams {
    pub fn validate(&self) -> Result<()> {
        positive("eps_p", self.eps_p)?;
        positive("eps_d", self.eps_d)?;
        positive("eps0", self.eps0)?;
        positive("mu0", self.mu0)?;
        unit_open("theta_eps", self.theta_eps)?;
        unit_open("theta_mu", self.theta_mu)?;
        if self.max_outer_iters == 0 {
            return Err(Error::InvalidParameter("max_outer_iters must be positive".into()));
        }
        Ok(())
    }
}

/// Constants of the inner forward-backward loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InnerParams {
    /// Initial stepsize `γ_0`, below the prox-boundedness threshold of `g`.
    pub gamma0: f64,
    /// Linesearch constant `α ∈ (0, 1)`.
    pub alpha: f64,
    /// Backtracking factor `β ∈ (0, 1)`.
    pub beta: f64,
    pub max_inner_iters: usize,
    /// Backtracks allowed within one iteration.
    pub max_backtracks: usize,
}

impl Default for InnerParams {
    fn default() -> Self {
        InnerParams { gamma0: 1.0, alpha: 0.99, beta: 0.5, max_inner_iters: 1_000_000, max_backtracks: 120 }
    }
}

/// Stepsizes below this are treated as underflow.
pub const GAMMA_FLOOR: f64 = 1e-15;

impl InnerParams {
    /// Checks the constants against the prox-boundedness threshold `γ_g`.
    pub fn validate(&self, prox_bound_threshold: f64) -> Result<()> {
        positive("gamma0", self.gamma0)?;
        if !(self.gamma0 < prox_bound_threshold) {
            return Err(Error::InvalidParameter(format!(
                "gamma0 = {} must be below the prox-boundedness threshold {}",
                self.gamma0, prox_bound_threshold
            )));
        }
        unit_open("alpha", self.alpha)?;
        unit_open("beta", self.beta)?;
        if self.max_inner_iters == 0 || self.max_backtracks == 0 {
            return Err(Error::InvalidParameter("iteration caps must be positive".into()));
        }
        Ok(())
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

fn unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")))
    }
}
