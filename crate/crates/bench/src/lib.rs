//! Inputs shared by the criterion benches, generated from a fixed seed so
//! runs are comparable across machines and commits.

use iprox::rng::XorShift64Star;

/// `count` points in `[-10, 10)` and a step size drawn log-uniformly
/// from `[1e-4, 10)`.
pub fn prox_inputs(count: usize, seed: u64) -> (Vec<f64>, f64) {
    let mut rng = XorShift64Star::seed(seed);
    let x = (0..count).map(|_| rng.range(-10.0, 10.0)).collect();
    let gamma = 10f64.powf(rng.range(-4.0, 1.0));
    (x, gamma)
}
