//! KKT reporting for solver outputs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::objective::eval_constraints;
use crate::outer::{kkt_exit, PrimalDualPair};
use crate::params::OuterParams;
use crate::problem::Problem;
use crate::trace::SolveTrace;
use crate::vector::{norm, transpose_mul};

/// Constraints with `|c_i| ≤ ACTIVITY_FACTOR · ε_p` are flagged active. The
/// flag is informational and plays no part in certification.
pub const ACTIVITY_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KktRow {
    pub index: usize,
    pub c: f64,
    pub y: f64,
    /// `min{-c_i, y_i}`.
    pub complementarity: f64,
    pub active: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KktClass {
    EpsKktCertified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KktReport {
    pub rows: Vec<KktRow>,
    /// Certified bound on `dist(-∇c(x)ᵀy, ∂q(x))`.
    pub dual_certificate: f64,
    /// Norm of the inner residual behind the certificate.
    pub dual_residual: f64,
    /// `max_i min{-c_i, y_i}`.
    pub primal_residual: f64,
    pub eps_p: f64,
    pub eps_d: f64,
    pub classification: KktClass,
}

impl KktReport {
    pub fn certified(&self) -> bool {
        self.classification == KktClass::EpsKktCertified
    }
}

/// Tabulates complementarity per constraint and classifies the pair as
/// `(ε_p, ε_d)`-KKT or not, using the outer loop's own exit test.
pub fn build_kkt_report(pair: &PrimalDualPair, problem: &dyn Problem, outer: &OuterParams) -> Result<KktReport> {
    let c = eval_constraints(problem, &pair.x)?;
    if c.len() != pair.y.len() {
        return Err(Error::DimensionMismatch { expected: c.len(), got: pair.y.len() });
    }
    let threshold = ACTIVITY_FACTOR * outer.eps_p;
    let rows: Vec<KktRow> = c
        .iter()
        .zip(&pair.y)
        .enumerate()
        .map(|(index, (&ci, &yi))| KktRow {
            index,
            c: ci,
            y: yi,
            complementarity: (-ci).min(yi),
            active: ci.abs() <= threshold,
        })
        .collect();
    let primal_residual = rows.iter().map(|r| r.complementarity).fold(0.0, f64::max);
    let classification = if kkt_exit(pair.dual_bound, primal_residual, outer) {
        KktClass::EpsKktCertified
    } else {
        KktClass::NotCertified
    };
    Ok(KktReport {
        rows,
        dual_certificate: pair.dual_bound,
        dual_residual: pair.dual_residual,
        primal_residual,
        eps_p: outer.eps_p,
        eps_d: outer.eps_d,
        classification,
    })
}

/// Rebuilds the dual certificate from fresh evaluations at `x`.
///
/// With `s ∈ ∂̂g(x)` taken from the pair, `∇f(x) + s` lies in `∂̂q(x)`, so
/// `‖∇f(x) + s + ∇c(x)ᵀy‖` bounds `dist(-∇c(x)ᵀy, ∂q(x))`. For pairs
/// produced by the solver this equals `‖r‖` up to rounding.
pub fn recompose_dual_certificate(problem: &dyn Problem, pair: &PrimalDualPair) -> Result<f64> {
    let n = problem.dim();
    if pair.g_subgradient.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pair.g_subgradient.len() });
    }
    let grad = problem.grad_f(&pair.x);
    let jty = transpose_mul(&problem.jac_c(&pair.x), &pair.y, n);
    let v: Vec<f64> = grad.iter().zip(&pair.g_subgradient).zip(&jty).map(|((gf, s), cy)| gf + s + cy).collect();
    Ok(norm(&v))
}

/// Primal residual at the first and last outer iteration of a trace.
pub fn complementarity_span(trace: &SolveTrace) -> Option<(f64, f64)> {
    let first = trace.outer.first()?.primal_residual;
    let last = trace.outer.last()?.primal_residual;
    Some((first, last))
}

/// `‖y^k‖∞` per outer iteration; unbounded growth hints at a run whose
/// limit is only asymptotically KKT.
pub fn multiplier_norms(trace: &SolveTrace) -> Vec<f64> {
    trace.outer.iter().map(|r| r.y_inf_norm).collect()
}
