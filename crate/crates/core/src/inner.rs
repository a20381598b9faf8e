//! Adaptive forward-backward solver for the barrier subproblem
//!
//! ```text
//! minimize  q_μ(z) = f(z) + μ Σ b(c_i(z)) + g(z)
//! ```
//!
//! Each iteration computes `z̄ = prox_{γg}(z - γ∇f_μ(z))` and backtracks
//! `γ ← βγ` until three conditions hold:
//!
//! 1. `c(z̄) < 0`,
//! 2. `q_μ(z̄) ≤ q_μ(z) - (1-α)/(2γ) ‖z̄ - z‖²`,
//! 3. `‖∇f_μ(z̄) - ∇f_μ(z)‖ ≤ (α/γ) ‖z̄ - z‖`.
//!
//! The stepsize is carried over to the next iteration and never increased.
//! The solve stops once the residual
//! `r = (z - z̄)/γ - ∇f_μ(z) + ∇f_μ(z̄)`, an element of the limiting
//! subdifferential of `q_μ` at `z̄`, has norm at most `ε`.

use serde::Serialize;

use crate::barrier::Barrier;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::objective::{
    barrier_gradient_with_constraints, barrier_term, eval_constraints, eval_f, eval_g, eval_inner_objective,
    first_violation, require_strictly_feasible,
};
use crate::params::{InnerParams, GAMMA_FLOOR};
use crate::problem::Problem;
use crate::trace::{InnerRecord, TraceSink};
use crate::vector::{dist, norm, primal_residual_with_barrier};

/// Why the inner solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerStatus {
    Converged,
    IterationCap,
    BacktrackCap,
    StepsizeUnderflow,
}

impl InnerStatus {
    pub fn converged(self) -> bool {
        self == InnerStatus::Converged
    }
}

/// Output of [`ipfb_solve`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerResult {
    /// The returned point `z̄^j`, or the last accepted iterate on a cap.
    pub z_star: Vec<f64>,
    /// `r = (z^j - z̄^j)/γ_j - ∇f_μ(z^j) + ∇f_μ(z̄^j)`; empty if no iteration
    /// was accepted.
    pub residual_vector: Vec<f64>,
    /// `‖r‖`, or `+∞` if no iteration was accepted.
    pub residual_norm: f64,
    /// `(z^j - z̄^j)/γ_j - ∇f_μ(z^j)`, an element of `∂̂g(z̄^j)`.
    pub g_subgradient: Vec<f64>,
    pub final_gamma: f64,
    /// Accepted iterations.
    pub iterations: usize,
    pub status: InnerStatus,
    /// `q_μ(z^0)`.
    pub q_mu_start: f64,
    /// `q_μ(z_star)`.
    pub q_mu_star: f64,
    pub grad_evals: usize,
    pub prox_evals: usize,
    pub backtracks: usize,
}

/// A strictly feasible point with its cached `q_μ` and `∇f_μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchor {
    pub z: Vec<f64>,
    pub q_mu: f64,
    pub grad: Vec<f64>,
}

impl Anchor {
    /// Evaluates `q_μ` and `∇f_μ` at `z`. Fails unless `c(z) < 0` and
    /// `g(z) < ∞`.
    pub fn new(problem: &dyn Problem, barrier: &dyn Barrier, mu: f64, z: &[f64]) -> Result<Self> {
        check_dim(problem, z)?;
        let c = eval_constraints(problem, z)?;
        require_strictly_feasible(&c)?;
        let q_mu = eval_inner_objective(problem, barrier, mu, z)?.finite().ok_or(Error::OutsideDomain)?;
        let grad = barrier_gradient_with_constraints(problem, barrier, mu, z, &c)?;
        Ok(Anchor { z: z.to_vec(), q_mu, grad })
    }
}

/// Which linesearch condition rejected a trial point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinesearchFailure {
    /// Some `c_i(z̄) >= 0`.
    Boundary { index: usize },
    /// `g(z̄) = +∞`.
    OutsideDomain,
    /// Sufficient decrease failed.
    InsufficientDecrease,
    /// Local Lipschitz estimate failed.
    GradientVariation,
}

/// Data computed at an accepted trial point, reused by the next iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Accepted {
    pub q_mu: f64,
    pub grad: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinesearchOutcome {
    Pass(Accepted),
    Fail(LinesearchFailure),
}

impl LinesearchOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, LinesearchOutcome::Pass(_))
    }
}

/// Evaluates the three acceptance conditions for `z̄` against `anchor`, in
/// order, stopping at the first failure.
///
/// A boundary failure costs one `c` evaluation and nothing else. The
/// gradient at `z̄` is only computed once the first two conditions hold.
pub fn linesearch_check(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    mu: f64,
    anchor: &Anchor,
    z_bar: &[f64],
    gamma: f64,
    alpha: f64,
) -> Result<LinesearchOutcome> {
    let c = eval_constraints(problem, z_bar)?;
    if let Some(index) = first_violation(&c) {
        return Ok(LinesearchOutcome::Fail(LinesearchFailure::Boundary { index }));
    }

    let g = eval_g(problem, z_bar)?;
    let ExtReal::Finite(g) = g else {
        return Ok(LinesearchOutcome::Fail(LinesearchFailure::OutsideDomain));
    };
    let penalty = barrier_term(barrier, mu, &c).to_f64();
    let q_mu = eval_f(problem, z_bar)? + penalty + g;
    let step = dist(z_bar, &anchor.z);
    if !(q_mu <= anchor.q_mu - (1.0 - alpha) / (2.0 * gamma) * step * step) {
        return Ok(LinesearchOutcome::Fail(LinesearchFailure::InsufficientDecrease));
    }

    let grad = barrier_gradient_with_constraints(problem, barrier, mu, z_bar, &c)?;
    if !(dist(&grad, &anchor.grad) <= alpha / gamma * step) {
        return Ok(LinesearchOutcome::Fail(LinesearchFailure::GradientVariation));
    }
    Ok(LinesearchOutcome::Pass(Accepted { q_mu, grad, c }))
}

/// `prox_{γg}(z - γ g)` for a precomputed gradient `g`.
fn prox_point(problem: &dyn Problem, z: &[f64], grad: &[f64], gamma: f64) -> Result<Vec<f64>> {
    let forward: Vec<f64> = z.iter().zip(grad).map(|(zi, gi)| zi - gamma * gi).collect();
    let z_bar = problem.prox_g(&forward, gamma);
    if z_bar.len() != z.len() {
        return Err(Error::DimensionMismatch { expected: z.len(), got: z_bar.len() });
    }
    if let Some(i) = z_bar.iter().position(|v| !v.is_finite()) {
        return Err(Error::EvalFault { what: "prox_g", index: Some(i) });
    }
    Ok(z_bar)
}

/// One forward-backward step `prox_{γg}(z - γ∇f_μ(z))`.
///
/// Requires `c(z) < 0` and `0 < γ < γ_g`. The result may violate the
/// constraints; callers must check.
pub fn forward_backward_step(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    mu: f64,
    z: &[f64],
    gamma: f64,
) -> Result<Vec<f64>> {
    check_dim(problem, z)?;
    if !(gamma > 0.0 && gamma < problem.prox_bound_threshold()) {
        return Err(Error::InvalidParameter(format!(
            "stepsize {gamma} outside (0, {})",
            problem.prox_bound_threshold()
        )));
    }
    let c = eval_constraints(problem, z)?;
    require_strictly_feasible(&c)?;
    let grad = barrier_gradient_with_constraints(problem, barrier, mu, z, &c)?;
    prox_point(problem, z, &grad, gamma)
}

/// Bookkeeping the outer loop threads through consecutive inner solves.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InnerContext {
    pub outer_iter: usize,
    /// Gradient evaluations already spent before this solve.
    pub grad_offset: usize,
    /// Prox evaluations already spent before this solve.
    pub prox_offset: usize,
}

/// Solves the barrier subproblem to `ε`-stationarity from a strictly
/// feasible `z0`.
///
/// On [`InnerStatus::Converged`], `residual_norm ≤ ε`, `c(z_star) < 0` and
/// `q_μ(z_star) ≤ q_μ(z0)`. The sink receives one record per accepted
/// iteration.
pub fn ipfb_solve(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    z0: &[f64],
    mu: f64,
    eps: f64,
    params: &InnerParams,
    sink: &mut dyn TraceSink,
) -> Result<InnerResult> {
    ipfb_solve_in(problem, barrier, z0, mu, eps, params, InnerContext::default(), sink)
}

/// [`ipfb_solve`] with explicit outer-loop bookkeeping.
#[allow(clippy::too_many_arguments)]
pub fn ipfb_solve_in(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    z0: &[f64],
    mu: f64,
    eps: f64,
    params: &InnerParams,
    ctx: InnerContext,
    sink: &mut dyn TraceSink,
) -> Result<InnerResult> {
    params.validate(problem.prox_bound_threshold())?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("inner tolerance must be positive, got {eps}")));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("barrier weight must be nonnegative, got {mu}")));
    }

    let mut anchor = Anchor::new(problem, barrier, mu, z0)?;
    let mut run = Progress { q_mu_start: anchor.q_mu, grad_evals: 1, ..Progress::default() };
    let mut gamma = params.gamma0;

    for j in 0..params.max_inner_iters {
        let mut backtracks = 0;
        let (z_bar, accepted) = loop {
            let z_bar = prox_point(problem, &anchor.z, &anchor.grad, gamma)?;
            run.prox_evals += 1;
            match linesearch_check(problem, barrier, mu, &anchor, &z_bar, gamma, params.alpha)? {
                LinesearchOutcome::Pass(accepted) => {
                    run.grad_evals += 1;
                    break (z_bar, accepted);
                }
                LinesearchOutcome::Fail(LinesearchFailure::GradientVariation) => run.grad_evals += 1,
                LinesearchOutcome::Fail(_) => {}
            }
            gamma *= params.beta;
            backtracks += 1;
            run.backtracks += 1;
            if backtracks > params.max_backtracks {
                return Ok(run.finish(anchor, InnerStatus::BacktrackCap, gamma));
            }
            if gamma < GAMMA_FLOOR {
                return Ok(run.finish(anchor, InnerStatus::StepsizeUnderflow, gamma));
            }
        };

        let step_norm = dist(&z_bar, &anchor.z);
        debug_assert!(
            accepted.q_mu <= anchor.q_mu - (1.0 - params.alpha) / (2.0 * gamma) * step_norm * step_norm,
            "sufficient decrease violated"
        );
        let g_subgradient: Vec<f64> =
            anchor.z.iter().zip(&z_bar).zip(&anchor.grad).map(|((zi, zbi), gi)| (zi - zbi) / gamma - gi).collect();
        let residual: Vec<f64> = g_subgradient.iter().zip(&accepted.grad).map(|(si, gbi)| si + gbi).collect();
        let residual_norm = norm(&residual);

        sink.on_inner(&InnerRecord {
            outer_iter: ctx.outer_iter,
            inner_iter: j,
            gamma,
            q_mu: accepted.q_mu,
            inner_residual: residual_norm,
            primal_residual: primal_residual_with_barrier(&accepted.c, barrier, mu),
            decrease: anchor.q_mu - accepted.q_mu,
            step_norm,
            eps_k: eps,
            mu_k: mu,
            backtracks,
            grad_evals: ctx.grad_offset + run.grad_evals,
            prox_evals: ctx.prox_offset + run.prox_evals,
            max_constraint: accepted.c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            x: z_bar.clone(),
        });

        anchor = Anchor { z: z_bar, q_mu: accepted.q_mu, grad: accepted.grad };
        run.iterations = j + 1;
        run.last = Some(Certificate { residual, residual_norm, g_subgradient });
        if residual_norm <= eps {
            return Ok(run.finish(anchor, InnerStatus::Converged, gamma));
        }
    }

    Ok(run.finish(anchor, InnerStatus::IterationCap, gamma))
}

#[derive(Debug, Default)]
struct Certificate {
    residual: Vec<f64>,
    residual_norm: f64,
    g_subgradient: Vec<f64>,
}

#[derive(Debug, Default)]
struct Progress {
    q_mu_start: f64,
    iterations: usize,
    grad_evals: usize,
    prox_evals: usize,
    backtracks: usize,
    last: Option<Certificate>,
}

impl Progress {
    fn finish(self, anchor: Anchor, status: InnerStatus, gamma: f64) -> InnerResult {
        let cert = self.last.unwrap_or(Certificate { residual_norm: f64::INFINITY, ..Default::default() });
        InnerResult {
            z_star: anchor.z,
            residual_vector: cert.residual,
            residual_norm: cert.residual_norm,
            g_subgradient: cert.g_subgradient,
            final_gamma: gamma,
            iterations: self.iterations,
            status,
            q_mu_start: self.q_mu_start,
            q_mu_star: anchor.q_mu,
            grad_evals: self.grad_evals,
            prox_evals: self.prox_evals,
            backtracks: self.backtracks,
        }
    }
}

fn check_dim(problem: &dyn Problem, z: &[f64]) -> Result<()> {
    if z.len() == problem.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: problem.dim(), got: z.len() })
    }
}
