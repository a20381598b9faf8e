//! Barrier functions `b : (-∞, 0) → [0, ∞)`.

use serde::Serialize;

use crate::ext::ExtReal;

/// A scalar barrier with `dom b = (-∞, 0)`.
///
/// Requirements: `b >= 0`, `b' > 0` on `(-∞, 0)`, twice continuously
/// differentiable, and `b(t) → ∞` as `t → 0⁻`. Use [`validate_barrier`] to
/// check a candidate on a sample grid.
pub trait Barrier: Send + Sync {
    /// Value of `b` on its domain. Only called with `t < 0`.
    fn value_inside(&self, t: f64) -> f64;

    /// First derivative `b'`. Only called with `t < 0`.
    fn d1(&self, t: f64) -> f64;

    /// Second derivative `b''`. Only called with `t < 0`.
    fn d2(&self, t: f64) -> f64;

    fn name(&self) -> &str;

    /// `b(t)`, with `+∞` for every `t >= 0`.
    fn value(&self, t: f64) -> ExtReal {
        if t < 0.0 {
            ExtReal::Finite(self.value_inside(t))
        } else {
            ExtReal::PosInf
        }
    }
}

/// `b(t) = -1/t`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Reciprocal;

impl Barrier for Reciprocal {
    fn value_inside(&self, t: f64) -> f64 {
        -1.0 / t
    }

    fn d1(&self, t: f64) -> f64 {
        1.0 / (t * t)
    }

    fn d2(&self, t: f64) -> f64 {
        -2.0 / (t * t * t)
    }

    fn name(&self) -> &str {
        "reciprocal"
    }
}

/// A barrier built from three closures, for experimenting with candidates.
pub struct FnBarrier<B, D1, D2> {
    pub name: String,
    pub value: B,
    pub d1: D1,
    pub d2: D2,
}

impl<B, D1, D2> Barrier for FnBarrier<B, D1, D2>
where
    B: Fn(f64) -> f64 + Send + Sync,
    D1: Fn(f64) -> f64 + Send + Sync,
    D2: Fn(f64) -> f64 + Send + Sync,
{
    fn value_inside(&self, t: f64) -> f64 {
        (self.value)(t)
    }
    fn d1(&self, t: f64) -> f64 {
        (self.d1)(t)
    }
    fn d2(&self, t: f64) -> f64 {
        (self.d2)(t)
    }
    fn name(&self) -> &str {
        &self.name
    }
}

/// Looks up a built-in barrier by name.
pub fn barrier_by_name(name: &str) -> Option<Box<dyn Barrier>> {
    match name {
        "reciprocal" => Some(Box::new(Reciprocal)),
        _ => None,
    }
}

/// A barrier axiom that failed on the sample grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum BarrierViolation {
    Negative { t: f64, value: f64 },
    NotIncreasing { t: f64, derivative: f64 },
    FirstDerivativeMismatch { t: f64, analytic: f64, finite_difference: f64 },
    SecondDerivativeMismatch { t: f64, analytic: f64, finite_difference: f64 },
    NoBoundaryDivergence { value_near_zero: f64 },
    NotInfiniteOutsideDomain { t: f64 },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BarrierReport {
    pub violations: Vec<BarrierViolation>,
}

impl BarrierReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Value of `b` at `-1e-8` must reach this for the divergence proxy.
pub const DIVERGENCE_PROXY: f64 = 1e7;

const DERIVATIVE_RTOL: f64 = 1e-5;

/// Checks the barrier axioms on a grid of negative sample points.
///
/// Panics if the grid is empty or contains a nonnegative point.
pub fn validate_barrier(barrier: &dyn Barrier, grid: &[f64]) -> BarrierReport {
    assert!(!grid.is_empty(), "sample grid must be nonempty");
    assert!(grid.iter().all(|&t| t < 0.0), "sample grid must be negative");

    let mut violations = Vec::new();
    for &t in grid {
        let value = barrier.value_inside(t);
        if !(value >= 0.0) {
            violations.push(BarrierViolation::Negative { t, value });
        }
        let d1 = barrier.d1(t);
        if !(d1 > 0.0) {
            violations.push(BarrierViolation::NotIncreasing { t, derivative: d1 });
        }

        // Keep the stencil inside (-∞, 0).
        let h = (1e-6 * t.abs()).max(1e-12).min(0.5 * t.abs());
        let fd1 = (barrier.value_inside(t + h) - barrier.value_inside(t - h)) / (2.0 * h);
        if !close(d1, fd1) {
            violations.push(BarrierViolation::FirstDerivativeMismatch { t, analytic: d1, finite_difference: fd1 });
        }
        let d2 = barrier.d2(t);
        let fd2 = (barrier.d1(t + h) - barrier.d1(t - h)) / (2.0 * h);
        if !close(d2, fd2) {
            violations.push(BarrierViolation::SecondDerivativeMismatch { t, analytic: d2, finite_difference: fd2 });
        }
    }

    let near_zero = barrier.value_inside(-1e-8);
    if !(near_zero >= DIVERGENCE_PROXY) {
        violations.push(BarrierViolation::NoBoundaryDivergence { value_near_zero: near_zero });
    }
    for t in [0.0, 1e-8, 1.0] {
        if barrier.value(t) != ExtReal::PosInf {
            violations.push(BarrierViolation::NotInfiniteOutsideDomain { t });
        }
    }
    BarrierReport { violations }
}

fn close(analytic: f64, fd: f64) -> bool {
    (analytic - fd).abs() <= DERIVATIVE_RTOL * analytic.abs().max(fd.abs()).max(1.0)
}

/// Logarithmically spaced grid `-10^e` for `e` from `lo_exp` to `hi_exp`.
pub fn log_grid(lo_exp: i32, hi_exp: i32, per_decade: usize) -> Vec<f64> {
    let steps = (hi_exp - lo_exp) as usize * per_decade;
    (0..=steps).map(|i| -(10f64).powf(lo_exp as f64 + i as f64 / per_decade as f64)).collect()
}
