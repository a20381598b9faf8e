//! Outer interior-point loop: barrier continuation around the inner
//! forward-backward solver, with multiplier recovery `y_i = μ b'(c_i(x))`
//! and an `(ε_p, ε_d)`-KKT exit test.

use serde::Serialize;

use crate::barrier::Barrier;
use crate::error::{Error, Result};
use crate::inner::{ipfb_solve_in, InnerContext, InnerResult, InnerStatus};
use crate::objective::{eval_constraints, eval_cost, eval_inner_objective, require_strictly_feasible};
use crate::params::{InnerParams, OuterParams};
use crate::problem::Problem;
use crate::trace::{OuterRecord, TraceSink};
use crate::vector::inf_norm;

/// `y_i = μ b'(c_i)`. Every `c_i` must be strictly negative.
pub fn multiplier_estimate(c: &[f64], barrier: &dyn Barrier, mu: f64) -> Result<Vec<f64>> {
    require_strictly_feasible(c)?;
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("barrier weight must be positive, got {mu}")));
    }
    Ok(c.iter().map(|&ci| mu * barrier.d1(ci)).collect())
}

/// `max_i min{-c_i, y_i}`; zero when there are no constraints.
pub fn primal_residual(c: &[f64], y: &[f64]) -> f64 {
    c.iter().zip(y).map(|(&ci, &yi)| (-ci).min(yi)).fold(0.0, f64::max)
}

/// The exit test of the outer loop. Shared with the KKT report so both use
/// identical arithmetic.
pub fn kkt_exit(eps_k: f64, primal_residual: f64, params: &OuterParams) -> bool {
    eps_k <= params.eps_d && primal_residual <= params.eps_p
}

/// Rule producing `(ε_{k+1}, μ_{k+1})`. Any rule must satisfy
/// `0 < ε_{k+1} ≤ max{ε_d, θ_ε ε_k}` and `0 < μ_{k+1} ≤ θ_μ μ_k`; the solver
/// rejects updates that do not.
pub trait Schedule: Send + Sync {
    fn next_eps(&self, eps_k: f64, params: &OuterParams) -> f64;
    fn next_mu(&self, mu_k: f64, params: &OuterParams) -> f64;
}

/// Takes both upper bounds with equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct UpperBounds;

impl Schedule for UpperBounds {
    fn next_eps(&self, eps_k: f64, params: &OuterParams) -> f64 {
        params.eps_d.max(params.theta_eps * eps_k)
    }

    fn next_mu(&self, mu_k: f64, params: &OuterParams) -> f64 {
        params.theta_mu * mu_k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "inner")]
pub enum OuterStatus {
    Converged,
    OuterIterationCap,
    InnerFailed(InnerStatus),
}

impl OuterStatus {
    pub fn converged(self) -> bool {
        self == OuterStatus::Converged
    }
}

/// A primal point with its multiplier estimate and residual certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimalDualPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `ε_k`, the tolerance the last inner solve certified; bounds
    /// `dist(-∇c(x)ᵀy, ∂q(x))`.
    pub dual_bound: f64,
    /// `‖r‖` for the last inner residual `r`; never above `dual_bound` on
    /// converged runs.
    pub dual_residual: f64,
    /// `max_i min{-c_i(x), y_i}`.
    pub primal_residual: f64,
    /// The inner residual `r`.
    pub residual_vector: Vec<f64>,
    /// Element of `∂̂g(x)` paired with `r`.
    pub g_subgradient: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IpResult {
    pub pair: PrimalDualPair,
    pub status: OuterStatus,
    /// Completed outer iterations.
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub grad_evals: usize,
    pub prox_evals: usize,
    /// `q(x^0)`.
    pub cost_start: f64,
    /// `q(x⋆)`.
    pub cost: f64,
    pub final_mu: f64,
}

/// Runs the interior-point loop with the [`UpperBounds`] schedule.
pub fn ip_solve(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    x0: &[f64],
    outer: &OuterParams,
    inner: &InnerParams,
    sink: &mut dyn TraceSink,
) -> Result<IpResult> {
    ip_solve_with(problem, barrier, x0, outer, inner, &UpperBounds, sink)
}

/// Runs the interior-point loop from a strictly feasible `x0`.
///
/// Each inner solve is warm-started from the previous output. On
/// [`OuterStatus::Converged`] the returned pair is `(ε_p, ε_d)`-KKT and
/// `q(x⋆) ≤ q(x0)`. When an inner solve fails, the last certified pair (or,
/// at `k = 0`, the failed solve's strictly feasible point) is returned
/// together with the failing status.
pub fn ip_solve_with(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    x0: &[f64],
    outer: &OuterParams,
    inner: &InnerParams,
    schedule: &dyn Schedule,
    sink: &mut dyn TraceSink,
) -> Result<IpResult> {
    outer.validate()?;
    inner.validate(problem.prox_bound_threshold())?;
    if x0.len() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: x0.len() });
    }
    require_strictly_feasible(&eval_constraints(problem, x0)?)?;
    let cost_start = eval_cost(problem, x0)?.finite().ok_or(Error::OutsideDomain)?;

    let mut x = x0.to_vec();
    let mut eps_k = outer.eps0;
    let mut mu_k = outer.mu0;
    let mut prev_mu: Option<f64> = None;
    let mut totals = Totals { cost_start, ..Totals::default() };
    let mut best: Option<PrimalDualPair> = None;

    for k in 0..outer.max_outer_iters {
        let ctx = InnerContext { outer_iter: k, grad_offset: totals.grad_evals, prox_offset: totals.prox_evals };
        let sub = ipfb_solve_in(problem, barrier, &x, mu_k, eps_k, inner, ctx, sink)?;
        totals.grad_evals += sub.grad_evals;
        totals.prox_evals += sub.prox_evals;
        totals.inner_iterations += sub.iterations;
        totals.final_mu = mu_k;

        let c = eval_constraints(problem, &sub.z_star)?;
        let y = multiplier_estimate(&c, barrier, mu_k)?;
        let res_p = primal_residual(&c, &y);
        let pair = PrimalDualPair {
            x: sub.z_star.clone(),
            y,
            dual_bound: eps_k,
            dual_residual: sub.residual_norm,
            primal_residual: res_p,
            residual_vector: sub.residual_vector.clone(),
            g_subgradient: sub.g_subgradient.clone(),
        };

        if !sub.status.converged() {
            let status = OuterStatus::InnerFailed(sub.status);
            let pair = best.unwrap_or(pair);
            return totals.finish(problem, pair, status, k);
        }

        let step = OuterStep { k, mu_k, eps_k, prev_mu, x_start: &x, sub: &sub, pair: &pair, c: &c };
        sink.on_outer(&step.record(problem, barrier, &totals)?);

        if kkt_exit(eps_k, res_p, outer) {
            return totals.finish(problem, pair, OuterStatus::Converged, k + 1);
        }

        let next_eps = schedule.next_eps(eps_k, outer);
        let next_mu = schedule.next_mu(mu_k, outer);
        if !(next_eps > 0.0 && next_eps <= outer.eps_d.max(outer.theta_eps * eps_k)) {
            return Err(Error::InvalidParameter(format!("schedule produced inadmissible tolerance {next_eps}")));
        }
        if !(next_mu > 0.0 && next_mu <= outer.theta_mu * mu_k) {
            return Err(Error::InvalidParameter(format!("schedule produced inadmissible barrier weight {next_mu}")));
        }
        prev_mu = Some(mu_k);
        eps_k = next_eps;
        mu_k = next_mu;
        x = pair.x.clone();
        best = Some(pair);
    }

    let pair = best.expect("at least one outer iteration runs");
    totals.finish(problem, pair, OuterStatus::OuterIterationCap, outer.max_outer_iters)
}

struct OuterStep<'a> {
    k: usize,
    mu_k: f64,
    eps_k: f64,
    prev_mu: Option<f64>,
    x_start: &'a [f64],
    sub: &'a InnerResult,
    pair: &'a PrimalDualPair,
    c: &'a [f64],
}

impl OuterStep<'_> {
    fn record(&self, problem: &dyn Problem, barrier: &dyn Barrier, totals: &Totals) -> Result<OuterRecord> {
        let q = |mu: f64, z: &[f64]| -> Result<f64> { Ok(eval_inner_objective(problem, barrier, mu, z)?.to_f64()) };
        let pair = self.pair;
        Ok(OuterRecord {
            outer_iter: self.k,
            mu_k: self.mu_k,
            eps_k: self.eps_k,
            x: pair.x.clone(),
            y: pair.y.clone(),
            y_inf_norm: inf_norm(&pair.y),
            primal_residual: pair.primal_residual,
            inner_residual: self.sub.residual_norm,
            cost: eval_cost(problem, &pair.x)?.to_f64(),
            q_mu_new: q(self.mu_k, &pair.x)?,
            q_mu_start: q(self.mu_k, self.x_start)?,
            q_prev_mu_start: self.prev_mu.map(|mu| q(mu, self.x_start)).transpose()?,
            inner_iterations: self.sub.iterations,
            grad_evals: totals.grad_evals,
            prox_evals: totals.prox_evals,
            max_constraint: self.c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Default)]
struct Totals {
    cost_start: f64,
    grad_evals: usize,
    prox_evals: usize,
    inner_iterations: usize,
    final_mu: f64,
}

impl Totals {
    fn finish(
        self,
        problem: &dyn Problem,
        pair: PrimalDualPair,
        status: OuterStatus,
        outer_iterations: usize,
    ) -> Result<IpResult> {
        let cost = eval_cost(problem, &pair.x)?.to_f64();
        Ok(IpResult {
            pair,
            status,
            outer_iterations,
            inner_iterations: self.inner_iterations,
            grad_evals: self.grad_evals,
            prox_evals: self.prox_evals,
            cost_start: self.cost_start,
            cost,
            final_mu: self.final_mu,
        })
    }
}
