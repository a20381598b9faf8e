//! Small dense-vector helpers.

use crate::barrier::Barrier;

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `Jᵀ y` for a Jacobian stored as rows.
pub fn transpose_mul(jac: &[Vec<f64>], y: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (row, yi) in jac.iter().zip(y) {
        for (o, r) in out.iter_mut().zip(row) {
            *o += yi * r;
        }
    }
    out
}

/// `max_i min{-c_i, μ b'(c_i)}` for strictly negative `c`, zero if `m = 0`.
pub(crate) fn primal_residual_with_barrier(c: &[f64], barrier: &dyn Barrier, mu: f64) -> f64 {
    c.iter().map(|&ci| (-ci).min(mu * barrier.d1(ci))).fold(0.0, f64::max)
}
