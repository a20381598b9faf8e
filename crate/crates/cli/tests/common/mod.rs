//! Shared test helpers: an exact oracle for the convex quadratic-box
//! instances and a runner for the compiled binary.

#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use iprox::problems::QuadraticBox;
use nalgebra::{DMatrix, DVector};

/// Residual allowed in each equality-constrained KKT solve.
pub const LINEAR_SOLVE_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;

/// Unique minimizer of a [`QuadraticBox`] instance, found by trying every
/// candidate active set of the stacked constraints `Gx ≤ h`
/// (box bounds and linear rows) and keeping the one whose equality-
/// constrained solution is primal feasible with nonnegative multipliers.
pub fn active_set_oracle(problem: &QuadraticBox) -> Vec<f64> {
    let n = problem.p.len();
    let mut g_rows: Vec<Vec<f64>> = Vec::new();
    let mut h: Vec<f64> = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        g_rows.push(e.iter().map(|v| -v).collect());
        h.push(-problem.bounds.lo()[i]);
        g_rows.push(e);
        h.push(problem.bounds.hi()[i]);
    }
    for (row, bi) in problem.a.iter().zip(&problem.b) {
        g_rows.push(row.clone());
        h.push(*bi);
    }
    let total = g_rows.len();
    assert!(total <= 20, "enumeration is only meant for tiny instances");

    let q = DMatrix::from_fn(n, n, |i, j| problem.q[i][j]);
    let mut found: Vec<Vec<f64>> = Vec::new();
    for mask in 0u32..(1 << total) {
        let active: Vec<usize> = (0..total).filter(|i| mask & (1 << i) != 0).collect();
        if active.len() > n {
            continue;
        }
        let k = active.len();
        let mut kkt = DMatrix::zeros(n + k, n + k);
        let mut rhs = DVector::zeros(n + k);
        kkt.view_mut((0, 0), (n, n)).copy_from(&q);
        for i in 0..n {
            rhs[i] = -problem.p[i];
        }
        for (r, &w) in active.iter().enumerate() {
            for j in 0..n {
                kkt[(n + r, j)] = g_rows[w][j];
                kkt[(j, n + r)] = g_rows[w][j];
            }
            rhs[n + r] = h[w];
        }
        let Some(sol) = kkt.clone().lu().solve(&rhs) else { continue };
        if (&kkt * &sol - &rhs).amax() > LINEAR_SOLVE_TOL {
            continue;
        }
        let x: Vec<f64> = (0..n).map(|i| sol[i]).collect();
        let feasible =
            g_rows.iter().zip(&h).all(|(row, hi)| row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() <= hi + FEAS_TOL);
        let dual_ok = (0..k).all(|r| sol[n + r] >= -FEAS_TOL);
        if feasible && dual_ok {
            found.push(x);
        }
    }
    let first = found.first().expect("a strictly convex feasible problem has a KKT point").clone();
    for other in &found {
        let gap = other.iter().zip(&first).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(gap <= 1e-8, "oracle found two different KKT points");
    }
    first
}

pub fn iprox(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iprox"))
        .args(args)
        .current_dir(cwd)
        .env_remove("IPROX_OUT_DIR")
        .output()
        .expect("binary runs")
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
