use iprox::barrier::Reciprocal;
use iprox::fixtures::{Counting, HalfSpace};
use iprox::inner::{Anchor, LinesearchFailure, LinesearchOutcome};
use iprox::objective::{eval_barrier_gradient, eval_inner_objective};
use iprox::problems::{lookup, rosenbrock_instance};
use iprox::prox::prox_half_quasinorm;
use iprox::vector::{dist, norm};
use iprox::{
    forward_backward_step, ipfb_solve, linesearch_check, Error, InnerParams, InnerResult, InnerStatus, NoTrace,
    Problem, SolveTrace,
};

const X0: [f64; 2] = [0.0, 1.05];

#[test]
fn forward_step_without_prox_or_barrier_is_a_gradient_step() {
    let p = HalfSpace::with_quadratic(2);
    let z = [0.5, -0.25];
    let zb = forward_backward_step(&p, &Reciprocal, 0.0, &z, 0.1).unwrap();
    assert_eq!(zb, vec![0.5 - 0.1 * 0.5, -0.25 + 0.1 * 0.25]);
}

#[test]
fn forward_step_fixes_stationary_points() {
    let p = HalfSpace::with_quadratic(3);
    let z = [0.0, 0.0, 0.0];
    assert_eq!(forward_backward_step(&p, &Reciprocal, 0.0, &z, 0.7).unwrap(), z.to_vec());
}

#[test]
fn forward_step_composes_verified_primitives() {
    let p = rosenbrock_instance();
    let grad = eval_barrier_gradient(&p, &Reciprocal, 1.0, &X0).unwrap();
    let forward: Vec<f64> = X0.iter().zip(&grad).map(|(z, g)| z - g).collect();
    let expected = prox_half_quasinorm(&forward, 1.0).unwrap();
    assert_eq!(forward_backward_step(&p, &Reciprocal, 1.0, &X0, 1.0).unwrap(), expected);
}

#[test]
fn forward_step_rejects_infeasible_input_and_bad_steps() {
    let p = HalfSpace::new(1);
    assert!(matches!(
        forward_backward_step(&p, &Reciprocal, 1.0, &[1.0], 0.5),
        Err(Error::NotStrictlyFeasible { index: 0, .. })
    ));
    assert!(forward_backward_step(&p, &Reciprocal, 1.0, &[0.0], 0.0).is_err());
}

#[test]
fn forward_step_costs_one_gradient_and_one_prox() {
    let p = Counting::new(rosenbrock_instance());
    forward_backward_step(&p, &Reciprocal, 1.0, &X0, 0.5).unwrap();
    assert_eq!((p.grads(), p.jacs(), p.proxes()), (1, 1, 1));
    let p = Counting::new(rosenbrock_instance());
    eval_barrier_gradient(&p, &Reciprocal, 1.0, &X0).unwrap();
    assert_eq!((p.grads(), p.jacs()), (1, 1));
}

#[test]
fn boundary_trial_point_fails_without_gradient_work() {
    let p = Counting::new(HalfSpace::with_quadratic(2));
    let anchor = Anchor::new(&p, &Reciprocal, 1.0, &[0.0, 0.0]).unwrap();
    let before = p.grads();
    let out = linesearch_check(&p, &Reciprocal, 1.0, &anchor, &[1.0, 0.0], 0.5, 0.99).unwrap();
    assert_eq!(out, LinesearchOutcome::Fail(LinesearchFailure::Boundary { index: 0 }));
    assert_eq!(p.grads(), before);
}

#[test]
fn zero_displacement_passes() {
    let p = HalfSpace::with_quadratic(2);
    let z = [0.3, 0.1];
    let anchor = Anchor::new(&p, &Reciprocal, 1.0, &z).unwrap();
    let out = linesearch_check(&p, &Reciprocal, 1.0, &anchor, &z, 0.5, 0.99).unwrap();
    assert!(out.passed());
}

#[test]
fn insufficient_decrease_is_reported() {
    let p = HalfSpace::with_quadratic(1);
    let anchor = Anchor::new(&p, &Reciprocal, 1.0, &[0.0]).unwrap();
    // Moving toward the boundary raises the barrier term faster than f can drop.
    let out = linesearch_check(&p, &Reciprocal, 1.0, &anchor, &[0.5], 1.0, 0.99).unwrap();
    assert_eq!(out, LinesearchOutcome::Fail(LinesearchFailure::InsufficientDecrease));
}

#[test]
fn first_accepted_stepsize_is_reproducible() {
    let p = rosenbrock_instance();
    let run = || {
        let mut trace = SolveTrace::default();
        ipfb_solve(&p, &Reciprocal, &X0, 1.0, 1.0, &InnerParams::default(), &mut trace).unwrap();
        trace.inner[0].gamma
    };
    let first = run();
    assert_eq!(first.to_bits(), run().to_bits());
    // Regression lock: 2^-11 after eleven halvings from γ₀ = 1.
    assert_eq!(first, 0.5f64.powi(11));
}

#[test]
fn smooth_convex_case_reaches_small_gradient() {
    let p = HalfSpace::with_quadratic(3);
    let res = ipfb_solve(&p, &Reciprocal, &[0.0, 0.0, 0.0], 1e-8, 1e-6, &InnerParams::default(), &mut NoTrace).unwrap();
    assert_eq!(res.status, InnerStatus::Converged);
    let g = eval_barrier_gradient(&p, &Reciprocal, 1e-8, &res.z_star).unwrap();
    assert!(norm(&g) <= 1e-6);
    assert!(norm(&res.z_star) < 1e-6);

    let res =
        ipfb_solve(&p, &Reciprocal, &[0.9, -2.0, 3.0], 1e-8, 1e-6, &InnerParams::default(), &mut NoTrace).unwrap();
    assert_eq!(res.status, InnerStatus::Converged);
    let g = eval_barrier_gradient(&p, &Reciprocal, 1e-8, &res.z_star).unwrap();
    assert!(norm(&g) <= 1e-6, "{g:?}");
}

#[test]
fn stationary_start_returns_immediately() {
    let p = HalfSpace::new(2);
    let res = ipfb_solve(&p, &Reciprocal, &[0.0, 0.0], 0.0, 1e-9, &InnerParams::default(), &mut NoTrace).unwrap();
    assert_eq!(res.status, InnerStatus::Converged);
    assert_eq!(res.residual_norm, 0.0);
    assert_eq!(res.backtracks, 0);
    assert_eq!(res.iterations, 1);
    assert_eq!(res.z_star, vec![0.0, 0.0]);
}

#[test]
fn rejects_infeasible_or_out_of_domain_start() {
    let p = HalfSpace::new(1);
    let err = ipfb_solve(&p, &Reciprocal, &[2.0], 1.0, 1.0, &InnerParams::default(), &mut NoTrace).unwrap_err();
    assert!(matches!(err, Error::NotStrictlyFeasible { .. }));
    let q = lookup("qbox-2-3").unwrap();
    let err = ipfb_solve(&*q, &Reciprocal, &[5.0, 0.0], 1.0, 1.0, &InnerParams::default(), &mut NoTrace);
    assert!(err.is_err());
}

#[test]
fn caps_return_the_last_accepted_iterate() {
    let p = rosenbrock_instance();
    let params = InnerParams { max_inner_iters: 3, ..Default::default() };
    let mut trace = SolveTrace::default();
    let res = ipfb_solve(&p, &Reciprocal, &X0, 1.0, 1e-12, &params, &mut trace).unwrap();
    assert_eq!(res.status, InnerStatus::IterationCap);
    assert_eq!(trace.inner.len(), 3);
    assert_eq!(res.z_star, trace.inner[2].x);

    let params = InnerParams { max_backtracks: 2, ..Default::default() };
    let res = ipfb_solve(&p, &Reciprocal, &X0, 1.0, 1e-12, &params, &mut NoTrace).unwrap();
    assert_eq!(res.status, InnerStatus::BacktrackCap);
    assert_eq!(res.z_star, X0.to_vec());
    assert_eq!(res.iterations, 0);
}

#[test]
fn nan_evaluations_surface_as_faults() {
    let err =
        ipfb_solve(&iprox::fixtures::NanProblem, &Reciprocal, &[0.0], 1.0, 1.0, &InnerParams::default(), &mut NoTrace)
            .unwrap_err();
    assert!(matches!(err, Error::EvalFault { .. }));
}

#[test]
fn rosenbrock_first_subproblem_certificates() {
    let p = rosenbrock_instance();
    let res = ipfb_solve(&p, &Reciprocal, &X0, 1.0, 1.0, &InnerParams::default(), &mut NoTrace).unwrap();
    assert_eq!(res.status, InnerStatus::Converged);
    assert!(res.residual_norm <= 1.0);
    assert!(res.q_mu_star <= res.q_mu_start);
    assert!(p.c(&res.z_star)[0] < 0.0);
    let q0 = eval_inner_objective(&p, &Reciprocal, 1.0, &X0).unwrap().to_f64();
    let qs = eval_inner_objective(&p, &Reciprocal, 1.0, &res.z_star).unwrap().to_f64();
    assert_eq!((q0, qs), (res.q_mu_start, res.q_mu_star));
}

fn check_run_invariants(p: &dyn Problem, res: &InnerResult, trace: &SolveTrace, params: &InnerParams, mu: f64) {
    let mut prev_q = res.q_mu_start;
    let mut prev_gamma = params.gamma0;
    let mut summed = 0.0;
    for row in &trace.inner {
        assert!(p.c(&row.x).iter().all(|&c| c < 0.0));
        assert!(row.gamma <= prev_gamma);
        assert_eq!(row.gamma, prev_gamma * params.beta.powi(row.backtracks as i32));
        let bound = prev_q - (1.0 - params.alpha) / (2.0 * row.gamma) * row.step_norm * row.step_norm;
        assert!(row.q_mu <= bound + 1e-12, "descent violated: {} > {}", row.q_mu, bound);
        let recomputed = eval_inner_objective(p, &Reciprocal, mu, &row.x).unwrap().to_f64();
        assert_eq!(recomputed, row.q_mu);
        summed += row.step_norm * row.step_norm / row.gamma;
        prev_q = row.q_mu;
        prev_gamma = row.gamma;
    }
    let budget = 2.0 * (res.q_mu_start - prev_q) / (1.0 - params.alpha);
    assert!(summed <= budget * (1.0 + 1e-12) + 1e-12, "{summed} > {budget}");
}

#[test]
fn descent_feasibility_and_stepsize_invariants() {
    let params = InnerParams::default();
    type Case = (Box<dyn Problem>, Vec<f64>, f64, f64);
    let cases: Vec<Case> = vec![
        (Box::new(rosenbrock_instance()), X0.to_vec(), 1.0, 1e-4),
        (Box::new(rosenbrock_instance()), vec![0.8, 0.25], 0.01, 1e-4),
        (Box::new(rosenbrock_instance()), vec![-0.6, -0.2], 1e-4, 1e-5),
        (lookup("qbox-3-2").unwrap(), vec![0.0; 3], 1e-3, 1e-6),
    ];
    for (p, z0, mu, eps) in cases {
        let mut trace = SolveTrace::default();
        let res = ipfb_solve(&*p, &Reciprocal, &z0, mu, eps, &params, &mut trace).unwrap();
        assert_eq!(res.status, InnerStatus::Converged);
        assert_eq!(trace.inner.len(), res.iterations);
        check_run_invariants(&*p, &res, &trace, &params, mu);
    }
}

#[test]
fn residual_vector_matches_its_formula() {
    let p = rosenbrock_instance();
    let mut trace = SolveTrace::default();
    let res = ipfb_solve(&p, &Reciprocal, &X0, 0.1, 1e-3, &InnerParams::default(), &mut trace).unwrap();
    let n = trace.inner.len();
    let z = if n >= 2 { trace.inner[n - 2].x.clone() } else { X0.to_vec() };
    let zb = &res.z_star;
    let gz = eval_barrier_gradient(&p, &Reciprocal, 0.1, &z).unwrap();
    let gzb = eval_barrier_gradient(&p, &Reciprocal, 0.1, zb).unwrap();
    let r: Vec<f64> = (0..2).map(|i| (z[i] - zb[i]) / res.final_gamma - gz[i] + gzb[i]).collect();
    assert!(dist(&r, &res.residual_vector) <= 1e-9 * norm(&r).max(1.0));
    assert!((norm(&r) - res.residual_norm).abs() <= 1e-9 * norm(&r).max(1.0));
    assert!(res.residual_norm <= 1e-3);
}

#[test]
fn tight_tolerances_terminate_on_registered_problems() {
    let params = InnerParams::default();
    let p = rosenbrock_instance();
    let res = ipfb_solve(&p, &Reciprocal, &X0, 1.0, 1e-8, &params, &mut NoTrace).unwrap();
    assert_eq!(res.status, InnerStatus::Converged);
    for name in ["qbox-1-0", "qbox-2-7", "qbox-4-1"] {
        let q = lookup(name).unwrap();
        let z0 = q.default_start().unwrap();
        let res = ipfb_solve(&*q, &Reciprocal, &z0, 1e-3, 1e-8, &params, &mut NoTrace).unwrap();
        assert_eq!(res.status, InnerStatus::Converged, "{name}");
        assert!(res.residual_norm <= 1e-8);
    }
}
