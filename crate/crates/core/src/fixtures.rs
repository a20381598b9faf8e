//! Small analytic instances used by tests, docs and the benches.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::problem::Problem;

/// `c(z) = z_1 - 1` over `ℝⁿ` with `g ≡ 0` and either `f ≡ 0` or
/// `f(z) = ½‖z‖²`.
#[derive(Debug, Clone)]
pub struct HalfSpace {
    pub n: usize,
    pub quadratic: bool,
    /// Makes `c` return NaN, for fault-path tests.
    pub nan_constraint: bool,
}

impl HalfSpace {
    pub fn new(n: usize) -> Self {
        HalfSpace { n, quadratic: false, nan_constraint: false }
    }

    pub fn with_quadratic(n: usize) -> Self {
        HalfSpace { n, quadratic: true, nan_constraint: false }
    }
}

impl Problem for HalfSpace {
    fn dim(&self) -> usize {
        self.n
    }
    fn num_constraints(&self) -> usize {
        1
    }
    fn f(&self, x: &[f64]) -> f64 {
        if self.quadratic {
            0.5 * x.iter().map(|v| v * v).sum::<f64>()
        } else {
            0.0
        }
    }
    fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        if self.quadratic {
            x.to_vec()
        } else {
            vec![0.0; self.n]
        }
    }
    fn g(&self, _x: &[f64]) -> f64 {
        0.0
    }
    fn prox_g(&self, x: &[f64], _gamma: f64) -> Vec<f64> {
        x.to_vec()
    }
    fn c(&self, x: &[f64]) -> Vec<f64> {
        if self.nan_constraint {
            vec![f64::NAN]
        } else {
            vec![x[0] - 1.0]
        }
    }
    fn jac_c(&self, _x: &[f64]) -> Vec<Vec<f64>> {
        let mut row = vec![0.0; self.n];
        row[0] = 1.0;
        vec![row]
    }
    fn default_start(&self) -> Option<Vec<f64>> {
        Some(vec![0.0; self.n])
    }
}

/// One-dimensional instance whose `f` is NaN everywhere.
#[derive(Debug, Clone, Copy)]
pub struct NanProblem;

impl Problem for NanProblem {
    fn dim(&self) -> usize {
        1
    }
    fn num_constraints(&self) -> usize {
        1
    }
    fn f(&self, _x: &[f64]) -> f64 {
        f64::NAN
    }
    fn grad_f(&self, _x: &[f64]) -> Vec<f64> {
        vec![f64::NAN]
    }
    fn g(&self, _x: &[f64]) -> f64 {
        0.0
    }
    fn prox_g(&self, x: &[f64], _gamma: f64) -> Vec<f64> {
        x.to_vec()
    }
    fn c(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0] - 1.0]
    }
    fn jac_c(&self, _x: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![1.0]]
    }
}

/// Wraps a problem and counts evaluator calls.
#[derive(Debug, Default)]
pub struct Counting<P> {
    pub inner: P,
    pub f_calls: AtomicUsize,
    pub grad_calls: AtomicUsize,
    pub prox_calls: AtomicUsize,
    pub c_calls: AtomicUsize,
    pub jac_calls: AtomicUsize,
}

impl<P> Counting<P> {
    pub fn new(inner: P) -> Self {
        Counting {
            inner,
            f_calls: AtomicUsize::new(0),
            grad_calls: AtomicUsize::new(0),
            prox_calls: AtomicUsize::new(0),
            c_calls: AtomicUsize::new(0),
            jac_calls: AtomicUsize::new(0),
        }
    }

    pub fn grads(&self) -> usize {
        self.grad_calls.load(Ordering::Relaxed)
    }

    pub fn jacs(&self) -> usize {
        self.jac_calls.load(Ordering::Relaxed)
    }

    pub fn proxes(&self) -> usize {
        self.prox_calls.load(Ordering::Relaxed)
    }
}

impl<P: Problem> Problem for Counting<P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn num_constraints(&self) -> usize {
        self.inner.num_constraints()
    }
    fn f(&self, x: &[f64]) -> f64 {
        self.f_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.f(x)
    }
    fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        self.grad_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.grad_f(x)
    }
    fn g(&self, x: &[f64]) -> f64 {
        self.inner.g(x)
    }
    fn prox_g(&self, x: &[f64], gamma: f64) -> Vec<f64> {
        self.prox_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.prox_g(x, gamma)
    }
    fn c(&self, x: &[f64]) -> Vec<f64> {
        self.c_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.c(x)
    }
    fn jac_c(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.jac_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.jac_c(x)
    }
    fn prox_bound_threshold(&self) -> f64 {
        self.inner.prox_bound_threshold()
    }
    fn sampling_box(&self) -> (Vec<f64>, Vec<f64>) {
        self.inner.sampling_box()
    }
    fn default_start(&self) -> Option<Vec<f64>> {
        self.inner.default_start()
    }
}
