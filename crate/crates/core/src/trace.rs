//! Per-iteration records emitted by the solvers.

use serde::Serialize;

/// One accepted inner iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerRecord {
    /// Outer index `k`.
    pub outer_iter: usize,
    /// Inner index `j`.
    pub inner_iter: usize,
    /// Stepsize `γ_j` that was accepted.
    pub gamma: f64,
    /// `q_μ(z̄^j)`.
    pub q_mu: f64,
    /// Norm of the inner residual at this iteration.
    pub inner_residual: f64,
    /// `max_i min{-c_i(z̄^j), μ b'(c_i(z̄^j))}`.
    pub primal_residual: f64,
    /// `q_μ(z^j) - q_μ(z̄^j)`.
    pub decrease: f64,
    /// `‖z̄^j - z^j‖`.
    pub step_norm: f64,
    pub eps_k: f64,
    pub mu_k: f64,
    /// Backtracks spent in this iteration.
    pub backtracks: usize,
    /// Cumulative `∇f_μ` evaluations.
    pub grad_evals: usize,
    /// Cumulative prox evaluations.
    pub prox_evals: usize,
    /// Largest `c_i(z̄^j)`.
    pub max_constraint: f64,
    /// The accepted point `z̄^j`.
    pub x: Vec<f64>,
}

/// End of one outer iteration, after the multiplier update.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OuterRecord {
    pub outer_iter: usize,
    pub mu_k: f64,
    pub eps_k: f64,
    /// `x^{k+1}`.
    pub x: Vec<f64>,
    /// `y^{k+1}`.
    pub y: Vec<f64>,
    pub y_inf_norm: f64,
    pub primal_residual: f64,
    /// Norm of the residual returned by the inner solve.
    pub inner_residual: f64,
    /// `q(x^{k+1})`.
    pub cost: f64,
    /// `q_{μ_k}(x^{k+1})`.
    pub q_mu_new: f64,
    /// `q_{μ_k}(x^k)`.
    pub q_mu_start: f64,
    /// `q_{μ_{k-1}}(x^k)`; absent at `k = 0`.
    pub q_prev_mu_start: Option<f64>,
    pub inner_iterations: usize,
    pub grad_evals: usize,
    pub prox_evals: usize,
    pub max_constraint: f64,
}

/// Receives solver records. Sinks observe; they cannot steer the solve.
pub trait TraceSink {
    fn on_inner(&mut self, _record: &InnerRecord) {}
    fn on_outer(&mut self, _record: &OuterRecord) {}
}

/// Discards every record.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoTrace;

impl TraceSink for NoTrace {}

/// Keeps every record in memory.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveTrace {
    pub inner: Vec<InnerRecord>,
    pub outer: Vec<OuterRecord>,
}

impl TraceSink for SolveTrace {
    fn on_inner(&mut self, record: &InnerRecord) {
        self.inner.push(record.clone());
    }

    fn on_outer(&mut self, record: &OuterRecord) {
        self.outer.push(record.clone());
    }
}

impl SolveTrace {
    /// Inner records belonging to outer iteration `k`.
    pub fn inner_of(&self, k: usize) -> impl Iterator<Item = &InnerRecord> {
        self.inner.iter().filter(move |r| r.outer_iter == k)
    }
}

impl<T: TraceSink + ?Sized> TraceSink for &mut T {
    fn on_inner(&mut self, record: &InnerRecord) {
        (**self).on_inner(record)
    }
    fn on_outer(&mut self, record: &OuterRecord) {
        (**self).on_outer(record)
    }
}
