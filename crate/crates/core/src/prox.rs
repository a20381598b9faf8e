//! Proximal operators for the nonsmooth terms of the registered problems,
//! and a brute-force scalar prox used to verify them.
//!
//! All operators here are separable: the vector prox is the scalar rule
//! applied coordinatewise.

use crate::error::{Error, Result};

/// A coordinatewise proximal rule.
pub trait SeparableProx {
    /// Scalar prox of coordinate `index` at `xi` with stepsize `gamma`.
    fn prox_scalar(&self, index: usize, xi: f64, gamma: f64) -> f64;

    /// Value of the scalar term for coordinate `index`; `+∞` off its domain.
    fn value_scalar(&self, index: usize, t: f64) -> f64;

    fn apply(&self, x: &[f64], gamma: f64) -> Vec<f64> {
        x.iter().enumerate().map(|(i, &xi)| self.prox_scalar(i, xi, gamma)).collect()
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter().enumerate().map(|(i, &t)| self.value_scalar(i, t)).sum()
    }
}

fn check_step(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("prox stepsize must be positive, got {gamma}")))
    }
}

/// `‖x‖_{1/2}^{1/2} = Σ |x_i|^{1/2}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HalfQuasinorm;

impl HalfQuasinorm {
    /// Below this magnitude the prox is zero.
    pub fn threshold(gamma: f64) -> f64 {
        1.5 * gamma.powf(2.0 / 3.0)
    }

    /// Global minimizer of `t ↦ |t|^{1/2} + (t - x)²/(2γ)`.
    ///
    /// At `|x| = threshold(γ)` both `0` and the nonzero root are minimizers;
    /// `0` is returned.
    pub fn scalar(x: f64, gamma: f64) -> f64 {
        let ax = x.abs();
        if ax <= Self::threshold(gamma) {
            return 0.0;
        }
        let phi = (-(gamma / 4.0) * (3.0 / ax).powf(1.5)).acos();
        (2.0 / 3.0) * x * (1.0 + ((2.0 / 3.0) * phi).cos())
    }
}

impl SeparableProx for HalfQuasinorm {
    fn prox_scalar(&self, _index: usize, xi: f64, gamma: f64) -> f64 {
        Self::scalar(xi, gamma)
    }

    fn value_scalar(&self, _index: usize, t: f64) -> f64 {
        t.abs().sqrt()
    }
}

/// `weight · ‖x‖_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedL1 {
    pub weight: f64,
}

impl SeparableProx for WeightedL1 {
    fn prox_scalar(&self, _index: usize, xi: f64, gamma: f64) -> f64 {
        let shrink = gamma * self.weight;
        xi.signum() * (xi.abs() - shrink).max(0.0)
    }

    fn value_scalar(&self, _index: usize, t: f64) -> f64 {
        self.weight * t.abs()
    }
}

/// Indicator of the box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxIndicator {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxIndicator {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if let Some(i) = lo.iter().zip(&hi).position(|(l, h)| !(l <= h)) {
            return Err(Error::InvalidParameter(format!("empty box in coordinate {i}: [{}, {}]", lo[i], hi[i])));
        }
        Ok(BoxIndicator { lo, hi })
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }
}

impl SeparableProx for BoxIndicator {
    fn prox_scalar(&self, index: usize, xi: f64, _gamma: f64) -> f64 {
        xi.clamp(self.lo[index], self.hi[index])
    }

    fn value_scalar(&self, index: usize, t: f64) -> f64 {
        if self.lo[index] <= t && t <= self.hi[index] {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Elementwise prox of `γ‖·‖_{1/2}^{1/2}`.
pub fn prox_half_quasinorm(x: &[f64], gamma: f64) -> Result<Vec<f64>> {
    check_step(gamma)?;
    Ok(HalfQuasinorm.apply(x, gamma))
}

/// Soft thresholding by `γ · weight`.
pub fn prox_l1(x: &[f64], gamma: f64, weight: f64) -> Result<Vec<f64>> {
    check_step(gamma)?;
    if !(weight >= 0.0) {
        return Err(Error::InvalidParameter(format!("l1 weight must be nonnegative, got {weight}")));
    }
    Ok(WeightedL1 { weight }.apply(x, gamma))
}

/// Projection onto `[lo, hi]`.
pub fn prox_box_indicator(x: &[f64], lo: &[f64], hi: &[f64]) -> Result<Vec<f64>> {
    let bx = BoxIndicator::new(lo.to_vec(), hi.to_vec())?;
    if x.len() != lo.len() {
        return Err(Error::DimensionMismatch { expected: lo.len(), got: x.len() });
    }
    Ok(bx.apply(x, 1.0))
}

/// Width to which [`brute_force_prox_1d`] refines each grid candidate.
pub const ORACLE_REFINE_WIDTH: f64 = 1e-10;

/// Minimizes `h(t) + (t - x)²/(2γ)` by exhaustive search.
///
/// Scans `grid_points` uniform points on `[x - half_width, x + half_width]`
/// and refines every discrete local minimum by ternary search down to
/// [`ORACLE_REFINE_WIDTH`]. Ternary comparisons use the difference
/// `h(a) - h(b) + (a - b)(a + b - 2x)/(2γ)`, which keeps the rounding of the
/// quadratic out of the decision. Each refined point is then polished by
/// parabolic interpolation, which resolves flat smooth minima far better
/// than value comparisons can; the polished point is dropped only if it is
/// worse by more than rounding. The best local minimum wins; ties go to the
/// smallest magnitude.
///
/// Panics unless `grid_points >= 1000`, `half_width > 0` and `gamma > 0`.
pub fn brute_force_prox_1d<H>(h: H, gamma: f64, x: f64, half_width: f64, grid_points: usize) -> f64
where
    H: Fn(f64) -> f64,
{
    assert!(grid_points >= 1000, "grid_points must be at least 1000");
    assert!(half_width > 0.0, "half_width must be positive");
    assert!(gamma > 0.0, "gamma must be positive");

    let objective = |t: f64| {
        let v = h(t);
        if v == f64::INFINITY {
            f64::INFINITY
        } else {
            v + (t - x) * (t - x) / (2.0 * gamma)
        }
    };
    // Sign of objective(a) - objective(b).
    let a_below_b = |a: f64, b: f64| {
        let (ha, hb) = (h(a), h(b));
        match (ha == f64::INFINITY, hb == f64::INFINITY) {
            (true, _) => false,
            (false, true) => true,
            _ => (ha - hb) + (a - b) * (a + b - 2.0 * x) / (2.0 * gamma) < 0.0,
        }
    };
    let lo = x - half_width;
    let step = 2.0 * half_width / (grid_points - 1) as f64;
    let at = |i: usize| lo + step * i as f64;
    let values: Vec<f64> = (0..grid_points).map(|i| objective(at(i))).collect();

    let mut best_t = f64::NAN;
    let mut best_v = f64::INFINITY;
    let mut consider = |t: f64, v: f64| {
        let tie = (v - best_v).abs() <= 1e-14 * v.abs().max(1.0);
        if best_t.is_nan() || (v < best_v && !tie) || (tie && t.abs() < best_t.abs()) {
            best_t = t;
            best_v = v;
        }
    };

    for i in 0..grid_points {
        let v = values[i];
        if !v.is_finite() {
            continue;
        }
        let left = if i == 0 { f64::INFINITY } else { values[i - 1] };
        let right = if i + 1 == grid_points { f64::INFINITY } else { values[i + 1] };
        if v > left || v > right {
            continue;
        }
        let (lo_i, hi_i) = (at(i.saturating_sub(1)), at((i + 1).min(grid_points - 1)));
        let (mut a, mut b) = (lo_i, hi_i);
        while b - a > ORACLE_REFINE_WIDTH {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if a_below_b(m1, m2) {
                b = m2;
            } else {
                a = m1;
            }
        }
        // Near a smooth minimum the values are flat to rounding, so the
        // polished point wins unless it is visibly worse (as at a kink).
        let mut rep = 0.5 * (a + b);
        let v_rep = objective(rep);
        let polished = polish(&objective, rep);
        if objective(polished) <= v_rep + 4.0 * f64::EPSILON * v_rep.abs().max(1.0) {
            rep = polished;
        }
        // Kinks at zero are common; weigh zero exactly.
        if lo_i <= 0.0 && 0.0 <= hi_i && a_below_b(0.0, rep) {
            rep = 0.0;
        }
        let v = objective(rep);
        if v.is_finite() {
            consider(rep, v);
        }
    }
    best_t
}

/// Successive parabolic interpolation on a fixed stencil. Stops as soon as a
/// step leaves the stencil, hits `+∞`, meets nonpositive curvature or fails
/// to decrease the objective.
fn polish<F: Fn(f64) -> f64>(objective: &F, mut t: f64) -> f64 {
    const STENCIL: f64 = 1e-5;
    for _ in 0..3 {
        let (fm, f0, fp) = (objective(t - STENCIL), objective(t), objective(t + STENCIL));
        let curvature = fp - 2.0 * f0 + fm;
        if !(fm.is_finite() && f0.is_finite() && fp.is_finite()) || !(curvature > 0.0) {
            break;
        }
        let next = t - STENCIL * (fp - fm) / (2.0 * curvature);
        if !((next - t).abs() <= STENCIL) || !(objective(next) <= f0 + 1e-15 * f0.abs()) {
            break;
        }
        t = next;
    }
    t
}

/// Default grid resolution for the oracle.
pub const ORACLE_GRID_POINTS: usize = 100_000;
