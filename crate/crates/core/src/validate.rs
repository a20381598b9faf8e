//! Finite-difference and oracle checks for problem definitions.

use serde::Serialize;

use crate::barrier::{log_grid, validate_barrier, Barrier};
use crate::error::Result;
use crate::objective::{eval_barrier_gradient, eval_barrier_objective};
use crate::problem::Problem;
use crate::rng::XorShift64Star;

/// Central-difference step for coordinate value `v`.
pub fn fd_step(v: f64) -> f64 {
    (1e-6 * v.abs()).max(1e-6)
}

/// Central-difference gradient of a scalar map.
pub fn central_difference_gradient<F: Fn(&[f64]) -> f64>(f: F, x: &[f64]) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = fd_step(x[i]);
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Jacobian of a vector map, as `m` rows.
pub fn central_difference_jacobian<F: Fn(&[f64]) -> Vec<f64>>(c: F, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; x.len()]; m];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let h = fd_step(x[i]);
        probe[i] = x[i] + h;
        let up = c(&probe);
        probe[i] = x[i] - h;
        let down = c(&probe);
        probe[i] = x[i];
        for (r, row) in rows.iter_mut().enumerate() {
            row[i] = (up[r] - down[r]) / (2.0 * h);
        }
    }
    rows
}

/// `‖a - b‖∞ / max(1, ‖a‖∞)`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Minimum constraint slack `-c_i` required of sampled points, so that
/// finite-difference stencils stay inside the barrier domain.
pub const SAMPLE_SLACK: f64 = 1e-3;

/// Draws `count` points uniformly from the problem's sampling box, keeping
/// those with `c(x) ≤ -SAMPLE_SLACK` and `g(x) < ∞`.
pub fn sample_feasible_points(problem: &dyn Problem, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let (lo, hi) = problem.sampling_box();
    let mut rng = XorShift64Star::seed(seed);
    let mut points = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while points.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(&l, &h)| rng.range(l, h)).collect();
        let feasible = problem.c(&x).iter().all(|&ci| ci <= -SAMPLE_SLACK);
        if feasible && problem.g(&x).is_finite() {
            points.push(x);
        }
    }
    points
}

/// Result of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Largest observed error (meaning depends on the check).
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub detail: String,
}

impl CheckOutcome {
    fn from_worst(name: &str, worst: f64, tolerance: f64, samples: usize, detail: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: samples > 0 && worst <= tolerance,
            worst,
            tolerance,
            samples,
            detail,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Derivative tolerance used by [`validate_problem`].
pub const DERIVATIVE_RTOL: f64 = 1e-5;

/// `∇f` against central differences of `f`.
pub fn check_gradient(problem: &dyn Problem, points: &[Vec<f64>], tol: f64) -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut at = String::new();
    for x in points {
        let err = relative_error(&problem.grad_f(x), &central_difference_gradient(|z| problem.f(z), x));
        if !(err <= worst) {
            worst = err;
            at = format!("{x:?}");
        }
    }
    CheckOutcome::from_worst("gradient", worst, tol, points.len(), format!("worst at {at}"))
}

/// `∇c` against central differences of `c`.
pub fn check_jacobian(problem: &dyn Problem, points: &[Vec<f64>], tol: f64) -> CheckOutcome {
    let m = problem.num_constraints();
    let mut worst = 0.0f64;
    let mut at = String::new();
    for x in points {
        let analytic: Vec<f64> = problem.jac_c(x).concat();
        let fd: Vec<f64> = central_difference_jacobian(|z| problem.c(z), x, m).concat();
        let err = relative_error(&analytic, &fd);
        if !(err <= worst) {
            worst = err;
            at = format!("{x:?}");
        }
    }
    CheckOutcome::from_worst("jacobian", worst, tol, points.len(), format!("worst at {at}"))
}

/// `∇f_μ` against central differences of `f_μ`.
pub fn check_barrier_gradient(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    mu: f64,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut at = String::new();
    for x in points {
        let analytic = eval_barrier_gradient(problem, barrier, mu, x)?;
        let fd = central_difference_gradient(
            |z| eval_barrier_objective(problem, barrier, mu, z).map(|v| v.to_f64()).unwrap_or(f64::NAN),
            x,
        );
        let err = relative_error(&analytic, &fd);
        if !(err <= worst) {
            worst = err;
            at = format!("{x:?}");
        }
    }
    Ok(CheckOutcome::from_worst("barrier_gradient", worst, tol, points.len(), format!("worst at {at}")))
}

/// Points per check in [`check_prox_selection`].
const PROX_GRID_BUDGET: usize = 20_000;

/// Selection validity of `prox_g`: its proximal objective must not exceed
/// that of any point on a grid around the input, and `g` must be finite at
/// the output.
pub fn check_prox_selection(problem: &dyn Problem, samples: usize, seed: u64) -> CheckOutcome {
    let n = problem.dim();
    let (lo, hi) = problem.sampling_box();
    let gamma_max = problem.prox_bound_threshold().min(10.0);
    let per_axis = ((PROX_GRID_BUDGET as f64).powf(1.0 / n as f64).floor() as usize).max(3);
    let mut rng = XorShift64Star::seed(seed);
    let mut worst = 0.0f64;
    let mut detail = String::new();

    for _ in 0..samples {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(&l, &h)| rng.range(2.0 * l, 2.0 * h)).collect();
        let gamma = 1e-3 + (gamma_max - 1e-3) * rng.uniform() * 0.999;
        let p = problem.prox_g(&x, gamma);
        let objective = |z: &[f64]| {
            let g = problem.g(z);
            let d2: f64 = z.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum();
            g + d2 / (2.0 * gamma)
        };
        let at_prox = objective(&p);
        if !at_prox.is_finite() {
            worst = f64::INFINITY;
            detail = format!("g infinite at prox of {x:?}");
            continue;
        }
        let radius = x.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 2.0;
        // Axis candidates: a uniform grid plus 0 and x_i itself.
        let axes: Vec<Vec<f64>> = x
            .iter()
            .zip(&p)
            .map(|(&xi, &pi)| {
                let mut axis: Vec<f64> =
                    (0..per_axis).map(|k| xi - radius + 2.0 * radius * k as f64 / (per_axis - 1) as f64).collect();
                axis.extend([0.0, xi, pi]);
                axis
            })
            .collect();
        let mut index = vec![0usize; n];
        let mut z = vec![0.0; n];
        'grid: loop {
            for i in 0..n {
                z[i] = axes[i][index[i]];
            }
            let excess = at_prox - objective(&z);
            let scale = at_prox.abs().max(1.0);
            if excess / scale > worst {
                worst = excess / scale;
                detail = format!("grid point {z:?} beats prox at x={x:?}, gamma={gamma}");
            }
            for i in 0..n {
                index[i] += 1;
                if index[i] < axes[i].len() {
                    continue 'grid;
                }
                index[i] = 0;
            }
            break;
        }
    }
    CheckOutcome::from_worst("prox_selection", worst, 1e-8, samples, detail)
}

/// Options for [`validate_problem`].
#[derive(Debug, Clone)]
pub struct ValidationOptions {
    pub points: usize,
    pub prox_samples: usize,
    pub seed: u64,
    pub mus: Vec<f64>,
    pub tol: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { points: 100, prox_samples: 50, seed: 0, mus: vec![1.0, 1e-3], tol: DERIVATIVE_RTOL }
    }
}

/// Runs every check on a problem/barrier pair.
pub fn validate_problem(
    problem: &dyn Problem,
    barrier: &dyn Barrier,
    opts: &ValidationOptions,
) -> Result<ValidationReport> {
    let points = sample_feasible_points(problem, opts.points, opts.seed);
    let mut checks = vec![check_gradient(problem, &points, opts.tol), check_jacobian(problem, &points, opts.tol)];
    for &mu in &opts.mus {
        let mut check = check_barrier_gradient(problem, barrier, mu, &points, opts.tol)?;
        check.name = format!("barrier_gradient(mu={mu})");
        checks.push(check);
    }
    checks.push(check_prox_selection(problem, opts.prox_samples, opts.seed.wrapping_add(1)));

    let barrier_report = validate_barrier(barrier, &log_grid(-4, 1, 4));
    checks.push(CheckOutcome {
        name: format!("barrier_axioms({})", barrier.name()),
        passed: barrier_report.passed(),
        worst: barrier_report.violations.len() as f64,
        tolerance: 0.0,
        samples: 21,
        detail: format!("{:?}", barrier_report.violations),
    });
    Ok(ValidationReport { checks })
}
