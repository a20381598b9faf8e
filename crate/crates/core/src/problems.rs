//! Registered benchmark instances.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::prox::{BoxIndicator, HalfQuasinorm, SeparableProx};
use crate::rng::XorShift64Star;

/// Nonsmooth Rosenbrock with a circular hole:
///
/// ```text
/// minimize  100 (x₂ + 1 - (x₁ + 1)²)² + |x₁|^{1/2} + |x₂|^{1/2}
/// subject to ‖x - x_C‖² ≥ r_C²
/// ```
///
/// encoded with `c(x) = r_C² - ‖x - x_C‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rosenbrock {
    pub center: [f64; 2],
    pub radius: f64,
}

/// The three stationary points reached from the circle protocol, to two
/// decimals: the global minimizer and two local minimizers.
pub const ROSENBROCK_MINIMIZERS: [[f64; 2]; 3] = [[-0.12, -0.23], [0.21, 0.45], [-2.00, 0.0]];

impl Default for Rosenbrock {
    fn default() -> Self {
        Rosenbrock { center: [-0.25, 0.25], radius: 0.5 }
    }
}

pub fn rosenbrock_instance() -> Rosenbrock {
    Rosenbrock::default()
}

impl Problem for Rosenbrock {
    fn dim(&self) -> usize {
        2
    }
    fn num_constraints(&self) -> usize {
        1
    }
    fn f(&self, x: &[f64]) -> f64 {
        let r = x[1] + 1.0 - (x[0] + 1.0).powi(2);
        100.0 * r * r
    }
    fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        let r = x[1] + 1.0 - (x[0] + 1.0).powi(2);
        vec![-400.0 * r * (x[0] + 1.0), 200.0 * r]
    }
    fn g(&self, x: &[f64]) -> f64 {
        HalfQuasinorm.value(x)
    }
    fn prox_g(&self, x: &[f64], gamma: f64) -> Vec<f64> {
        HalfQuasinorm.apply(x, gamma)
    }
    fn c(&self, x: &[f64]) -> Vec<f64> {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        vec![self.radius * self.radius - dx * dx - dy * dy]
    }
    fn jac_c(&self, x: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![-2.0 * (x[0] - self.center[0]), -2.0 * (x[1] - self.center[1])]]
    }
    fn sampling_box(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![-2.5, -1.5], vec![1.5, 2.0])
    }
    fn default_start(&self) -> Option<Vec<f64>> {
        Some(vec![0.0, 1.05])
    }
}

/// Starting points `(0, 1/4) + 4/5 (cos ϑ_i, sin ϑ_i)` with
/// `ϑ_i = 2πi / count`, `i = 0, …, count-1`.
pub fn circle_starting_points(count: usize) -> Vec<[f64; 2]> {
    (0..count)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / count as f64;
            [0.8 * theta.cos(), 0.25 + 0.8 * theta.sin()]
        })
        .collect()
}

/// Rosenbrock with the sign of `∇f` flipped; validation must reject it.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FaultyGradient(pub Rosenbrock);

impl Problem for FaultyGradient {
    fn dim(&self) -> usize {
        2
    }
    fn num_constraints(&self) -> usize {
        1
    }
    fn f(&self, x: &[f64]) -> f64 {
        self.0.f(x)
    }
    fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        self.0.grad_f(x).into_iter().map(|v| -v).collect()
    }
    fn g(&self, x: &[f64]) -> f64 {
        self.0.g(x)
    }
    fn prox_g(&self, x: &[f64], gamma: f64) -> Vec<f64> {
        self.0.prox_g(x, gamma)
    }
    fn c(&self, x: &[f64]) -> Vec<f64> {
        self.0.c(x)
    }
    fn jac_c(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.0.jac_c(x)
    }
    fn sampling_box(&self) -> (Vec<f64>, Vec<f64>) {
        self.0.sampling_box()
    }
    fn default_start(&self) -> Option<Vec<f64>> {
        self.0.default_start()
    }
}

/// Strongly convex quadratic over a box with linear inequalities:
///
/// ```text
/// minimize  ½ xᵀQx + pᵀx + δ_[lo,hi](x)   subject to  Ax - b ≤ 0
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticBox {
    /// Row-major `n × n`, symmetric positive definite.
    pub q: Vec<Vec<f64>>,
    pub p: Vec<f64>,
    pub bounds: BoxIndicator,
    /// `m` rows of length `n`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl QuadraticBox {
    pub fn new(
        q: Vec<Vec<f64>>,
        p: Vec<f64>,
        lo: Vec<f64>,
        hi: Vec<f64>,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    ) -> Result<Self> {
        let n = p.len();
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if q.len() != n || q.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: q.len() });
        }
        if a.len() != b.len() || a.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: b.len(), got: a.len() });
        }
        if lo.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: lo.len() });
        }
        let bounds = BoxIndicator::new(lo, hi)?;
        Ok(QuadraticBox { q, p, bounds, a, b })
    }
}

/// Seeded instance of [`QuadraticBox`] with `m = n` linear constraints.
///
/// Draws, in this order, from [`XorShift64Star::seed`]`(seed)`:
/// `M` (`n × n`, row-major, entries in `[-1, 1)`), `p` (`[-3, 3)`),
/// `lo` (`-[0.5, 1.5)`), `hi` (`[0.5, 1.5)`), `A` (`m × n`, row-major,
/// `[-1, 1)`) and `b` (`[0.2, 1)`). Then `Q = MᵀM/n + I`. The origin is
/// strictly feasible and inside the box.
pub fn quadratic_box_instance(n: usize, seed: u64) -> Result<QuadraticBox> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let mut rng = XorShift64Star::seed(seed);
    let mut draw = |count: usize, lo: f64, hi: f64| -> Vec<f64> { (0..count).map(|_| rng.range(lo, hi)).collect() };
    let m_flat = draw(n * n, -1.0, 1.0);
    let p = draw(n, -3.0, 3.0);
    let lo: Vec<f64> = draw(n, 0.5, 1.5).into_iter().map(|v| -v).collect();
    let hi = draw(n, 0.5, 1.5);
    let a_flat = draw(n * n, -1.0, 1.0);
    let b = draw(n, 0.2, 1.0);

    let q = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mtm: f64 = (0..n).map(|k| m_flat[k * n + i] * m_flat[k * n + j]).sum();
                    mtm / n as f64 + if i == j { 1.0 } else { 0.0 }
                })
                .collect()
        })
        .collect();
    let a = a_flat.chunks(n).map(<[f64]>::to_vec).collect();
    QuadraticBox::new(q, p, lo, hi, a, b)
}

impl Problem for QuadraticBox {
    fn dim(&self) -> usize {
        self.p.len()
    }
    fn num_constraints(&self) -> usize {
        self.b.len()
    }
    fn f(&self, x: &[f64]) -> f64 {
        let quad: f64 = self.q.iter().zip(x).map(|(row, xi)| xi * dot(row, x)).sum();
        0.5 * quad + dot(&self.p, x)
    }
    fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        self.q.iter().zip(&self.p).map(|(row, pi)| dot(row, x) + pi).collect()
    }
    fn g(&self, x: &[f64]) -> f64 {
        self.bounds.value(x)
    }
    fn prox_g(&self, x: &[f64], gamma: f64) -> Vec<f64> {
        self.bounds.apply(x, gamma)
    }
    fn c(&self, x: &[f64]) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(row, bi)| dot(row, x) - bi).collect()
    }
    fn jac_c(&self, _x: &[f64]) -> Vec<Vec<f64>> {
        self.a.clone()
    }
    fn sampling_box(&self) -> (Vec<f64>, Vec<f64>) {
        (self.bounds.lo().to_vec(), self.bounds.hi().to_vec())
    }
    fn default_start(&self) -> Option<Vec<f64>> {
        let n = self.dim();
        let origin = vec![0.0; n];
        let inside = self.bounds.value(&origin) == 0.0 && self.c(&origin).iter().all(|&ci| ci < 0.0);
        inside.then_some(origin)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A registry entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemInfo {
    pub name: &'static str,
    pub summary: &'static str,
}

/// Named instances and name patterns understood by [`lookup`].
pub const REGISTRY: &[ProblemInfo] = &[
    ProblemInfo { name: "rosenbrock", summary: "nonsmooth Rosenbrock (l1/2 term) outside a disk, n=2, m=1" },
    ProblemInfo {
        name: "qbox-<n>-<seed>",
        summary: "seeded strongly convex quadratic over a box with n linear inequalities",
    },
    ProblemInfo {
        name: "faulty-gradient",
        summary: "rosenbrock with a sign-flipped gradient; fixture for validation failures",
    },
];

/// Resolves a registry name to an instance.
pub fn lookup(name: &str) -> Option<Box<dyn Problem>> {
    match name {
        "rosenbrock" => return Some(Box::new(rosenbrock_instance())),
        "faulty-gradient" => return Some(Box::new(FaultyGradient::default())),
        _ => {}
    }
    let rest = name.strip_prefix("qbox-")?;
    let (n, seed) = rest.split_once('-')?;
    let n: usize = n.parse().ok()?;
    let seed: u64 = seed.parse().ok()?;
    quadratic_box_instance(n, seed).ok().map(|p| Box::new(p) as Box<dyn Problem>)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_valley_point() {
        assert_eq!(rosenbrock_instance().f(&[-1.0, -1.0]), 0.0);
    }

    #[test]
    fn rosenbrock_orientation() {
        let p = rosenbrock_instance();
        assert_eq!(p.c(&[-0.25, 0.25]), vec![0.25]);
        assert!(p.c(&[1.0, 1.0])[0] < 0.0);
    }

    #[test]
    fn circle_points() {
        let pts = circle_starting_points(20);
        assert_eq!(pts.len(), 20);
        assert_eq!(pts[0], [0.8, 0.25]);
        let four = circle_starting_points(4);
        assert!(four[1][0].abs() < 1e-15);
        assert!((four[1][1] - 1.05).abs() < 1e-15);
    }

    #[test]
    fn circle_points_are_strictly_feasible() {
        let p = rosenbrock_instance();
        let margin = circle_starting_points(20).iter().map(|x| -p.c(x)[0]).fold(f64::INFINITY, f64::min);
        assert!(margin > 0.0);
        assert!(circle_starting_points(20).iter().all(|x| p.g(x).is_finite()));
    }

    #[test]
    fn qbox_is_deterministic_and_feasible_at_origin() {
        let a = quadratic_box_instance(3, 7).unwrap();
        let b = quadratic_box_instance(3, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, quadratic_box_instance(3, 8).unwrap());
        assert_eq!(a.default_start(), Some(vec![0.0; 3]));
        for i in 0..3 {
            assert!(a.q[i][i] >= 1.0);
            for j in 0..3 {
                assert_eq!(a.q[i][j], a.q[j][i]);
            }
        }
    }

    #[test]
    fn registry_lookup() {
        assert!(lookup("rosenbrock").is_some());
        assert_eq!(lookup("qbox-2-7").unwrap().dim(), 2);
        assert!(lookup("qbox-0-7").is_none());
        assert!(lookup("qbox-2").is_none());
        assert!(lookup("nope").is_none());
    }
}
