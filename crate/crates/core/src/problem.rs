//! The problem interface: `minimize f(x) + g(x)` subject to `c(x) <= 0`.

/// An instance of the composite problem
///
/// ```text
/// minimize  f(x) + g(x)   subject to  c(x) <= 0
/// ```
///
/// with `f` and `c` continuously differentiable and `g` proper, lsc and
/// prox-bounded. `g` may take the value `+∞` (returned as `f64::INFINITY`).
///
/// Implementations must be pure: every method returns the same output for
/// the same input and holds no hidden mutable state. Solvers share a single
/// instance across threads.
pub trait Problem: Send + Sync {
    /// Decision dimension `n`.
    fn dim(&self) -> usize;

    /// Number of inequality constraints `m`.
    fn num_constraints(&self) -> usize;

    /// Smooth cost `f`.
    fn f(&self, x: &[f64]) -> f64;

    /// Gradient of `f`.
    fn grad_f(&self, x: &[f64]) -> Vec<f64>;

    /// Nonsmooth term `g`, `f64::INFINITY` outside its domain.
    fn g(&self, x: &[f64]) -> f64;

    /// One element of `prox_{γg}(x)`.
    fn prox_g(&self, x: &[f64], gamma: f64) -> Vec<f64>;

    /// Constraint values `c(x)`, length `m`.
    fn c(&self, x: &[f64]) -> Vec<f64>;

    /// Jacobian of `c`, stored as `m` rows of length `n`.
    fn jac_c(&self, x: &[f64]) -> Vec<Vec<f64>>;

    /// Prox-boundedness threshold `γ_g`; stepsizes must stay below it.
    fn prox_bound_threshold(&self) -> f64 {
        f64::INFINITY
    }

    /// Box from which validation points are sampled.
    fn sampling_box(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![-2.0; self.dim()], vec![2.0; self.dim()])
    }

    /// A strictly feasible starting point, when the instance has a natural one.
    fn default_start(&self) -> Option<Vec<f64>> {
        None
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn num_constraints(&self) -> usize {
        (**self).num_constraints()
    }
    fn f(&self, x: &[f64]) -> f64 {
        (**self).f(x)
    }
    fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        (**self).grad_f(x)
    }
    fn g(&self, x: &[f64]) -> f64 {
        (**self).g(x)
    }
    fn prox_g(&self, x: &[f64], gamma: f64) -> Vec<f64> {
        (**self).prox_g(x, gamma)
    }
    fn c(&self, x: &[f64]) -> Vec<f64> {
        (**self).c(x)
    }
    fn jac_c(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (**self).jac_c(x)
    }
    fn prox_bound_threshold(&self) -> f64 {
        (**self).prox_bound_threshold()
    }
    fn sampling_box(&self) -> (Vec<f64>, Vec<f64>) {
        (**self).sampling_box()
    }
    fn default_start(&self) -> Option<Vec<f64>> {
        (**self).default_start()
    }
}

impl<P: Problem + ?Sized> Problem for Box<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn num_constraints(&self) -> usize {
        (**self).num_constraints()
    }
    fn f(&self, x: &[f64]) -> f64 {
        (**self).f(x)
    }
    fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        (**self).grad_f(x)
    }
    fn g(&self, x: &[f64]) -> f64 {
        (**self).g(x)
    }
    fn prox_g(&self, x: &[f64], gamma: f64) -> Vec<f64> {
        (**self).prox_g(x, gamma)
    }
    fn c(&self, x: &[f64]) -> Vec<f64> {
        (**self).c(x)
    }
    fn jac_c(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (**self).jac_c(x)
    }
    fn prox_bound_threshold(&self) -> f64 {
        (**self).prox_bound_threshold()
    }
    fn sampling_box(&self) -> (Vec<f64>, Vec<f64>) {
        (**self).sampling_box()
    }
    fn default_start(&self) -> Option<Vec<f64>> {
        (**self).default_start()
    }
}
