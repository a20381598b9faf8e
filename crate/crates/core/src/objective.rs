//! The barrier-augmented objective `f_μ(z) = f(z) + μ Σ b(c_i(z))` and its
//! gradient.

use crate::barrier::Barrier;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::problem::Problem;

/// Evaluates `c(z)`, rejecting NaN entries.
pub fn eval_constraints(problem: &dyn Problem, z: &[f64]) -> Result<Vec<f64>> {
    let c = problem.c(z);
    if c.len() != problem.num_constraints() {
        return Err(Error::DimensionMismatch { expected: problem.num_constraints(), got: c.len() });
    }
    if let Some(i) = c.iter().position(|v| v.is_nan()) {
        return Err(Error::EvalFault { what: "c", index: Some(i) });
    }
    Ok(c)
}

/// Index of the first constraint with `c_i >= 0`, if any.
pub fn first_violation(c: &[f64]) -> Option<usize> {
    c.iter().position(|&ci| !(ci < 0.0))
}

/// Fails with [`Error::NotStrictlyFeasible`] unless every `c_i < 0`.
pub fn require_strictly_feasible(c: &[f64]) -> Result<()> {
    match first_violation(c) {
        Some(index) => Err(Error::NotStrictlyFeasible { index, value: c[index] }),
        None => Ok(()),
    }
}

/// `μ Σ b(c_i)` for already-evaluated constraint values.
pub fn barrier_term(barrier: &dyn Barrier, mu: f64, c: &[f64]) -> ExtReal {
    let mut sum = 0.0;
    for &ci in c {
        match barrier.value(ci) {
            ExtReal::Finite(b) => sum += b,
            ExtReal::PosInf => return ExtReal::PosInf,
        }
    }
    ExtReal::Finite(mu * sum)
}

/// `f_μ(z)`; `+∞` iff some `c_i(z) >= 0`.
///
/// `f` is not evaluated outside the barrier domain.
pub fn eval_barrier_objective(problem: &dyn Problem, barrier: &dyn Barrier, mu: f64, z: &[f64]) -> Result<ExtReal> {
    let c = eval_constraints(problem, z)?;
    let penalty = barrier_term(barrier, mu, &c);
    if !penalty.is_finite() {
        return Ok(ExtReal::PosInf);
    }
    let f = eval_f(problem, z)?;
    Ok(ExtReal::Finite(f) + penalty)
}

/// `q_μ(z) = f_μ(z) + g(z)`.
pub fn eval_inner_objective(problem: &dyn Problem, barrier: &dyn Barrier, mu: f64, z: &[f64]) -> Result<ExtReal> {
    let g = eval_g(problem, z)?;
    if !g.is_finite() {
        // Still surface NaN faults from c.
        eval_constraints(problem, z)?;
        return Ok(ExtReal::PosInf);
    }
    Ok(eval_barrier_objective(problem, barrier, mu, z)? + g)
}

/// `q(z) = f(z) + g(z)`, without the barrier and without the constraint test.
pub fn eval_cost(problem: &dyn Problem, z: &[f64]) -> Result<ExtReal> {
    let g = eval_g(problem, z)?;
    if !g.is_finite() {
        return Ok(ExtReal::PosInf);
    }
    Ok(ExtReal::Finite(eval_f(problem, z)?) + g)
}

pub fn eval_f(problem: &dyn Problem, z: &[f64]) -> Result<f64> {
    let f = problem.f(z);
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::EvalFault { what: "f", index: None })
    }
}

pub fn eval_g(problem: &dyn Problem, z: &[f64]) -> Result<ExtReal> {
    ExtReal::from_eval(problem.g(z), "g")
}

/// `∇f_μ(z) = ∇f(z) + μ Σ b'(c_i(z)) ∇c_i(z)`.
///
/// Requires `c(z) < 0`. Calls `grad_f`, `c` and `jac_c` once each.
pub fn eval_barrier_gradient(problem: &dyn Problem, barrier: &dyn Barrier, mu: f64, z: &[f64]) -> Result<Vec<f64>> {
    let c = eval_constraints(problem, z)?;
    require_strictly_feasible(&c)?;
    barrier_gradient_with_constraints(problem, barrier, mu, z, &c)
}

/// Same as [`eval_barrier_gradient`] when `c(z)` is already known and
/// strictly negative.
pub fn barrier_gradient_with_constraints(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    mu: f64,
    z: &[f64],
    c: &[f64],
) -> Result<Vec<f64>> {
    let n = problem.dim();
    let mut grad = problem.grad_f(z);
    if grad.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: grad.len() });
    }
    if let Some(i) = grad.iter().position(|v| !v.is_finite()) {
        return Err(Error::EvalFault { what: "grad_f", index: Some(i) });
    }
    if c.is_empty() {
        return Ok(grad);
    }
    let jac = problem.jac_c(z);
    if jac.len() != c.len() {
        return Err(Error::DimensionMismatch { expected: c.len(), got: jac.len() });
    }
    for (i, (row, &ci)) in jac.iter().zip(c).enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::EvalFault { what: "jac_c", index: Some(i) });
        }
        let weight = mu * barrier.d1(ci);
        for (gk, rk) in grad.iter_mut().zip(row) {
            *gk += weight * rk;
        }
    }
    Ok(grad)
}
