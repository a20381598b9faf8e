use iprox::barrier::{Barrier, Reciprocal};
use iprox::diagnostics::{complementarity_span, multiplier_norms, recompose_dual_certificate, KktClass};
use iprox::fixtures::HalfSpace;
use iprox::objective::eval_inner_objective;
use iprox::outer::{Schedule, UpperBounds};
use iprox::problems::{lookup, rosenbrock_instance, Rosenbrock, ROSENBROCK_MINIMIZERS};
use iprox::vector::{dist, norm};
use iprox::{
    build_kkt_report, ip_solve, ip_solve_with, multiplier_estimate, primal_residual, Error, InnerParams, IpResult,
    OuterParams, OuterStatus, Problem, SolveTrace,
};

const SLACK: f64 = 1e-12;

fn solve(p: &dyn Problem, x0: &[f64]) -> (IpResult, SolveTrace) {
    let mut trace = SolveTrace::default();
    let res = ip_solve(p, &Reciprocal, x0, &OuterParams::default(), &InnerParams::default(), &mut trace).unwrap();
    (res, trace)
}

#[test]
fn multiplier_examples() {
    assert_eq!(multiplier_estimate(&[-1.0], &Reciprocal, 1.0).unwrap(), vec![1.0]);
    assert_eq!(multiplier_estimate(&[-2.0], &Reciprocal, 1.0).unwrap(), vec![0.25]);
    let y = multiplier_estimate(&[-10.0], &Reciprocal, 1e-5).unwrap()[0];
    assert!((y - 1e-7).abs() <= 1e-20);
    // Central difference of b at t = -10.
    let h = 1e-4;
    let fd = (Reciprocal.value_inside(-10.0 + h) - Reciprocal.value_inside(-10.0 - h)) / (2.0 * h);
    assert!((1e-5 * fd - y).abs() <= 1e-7 * 1e-6);
}

#[test]
fn multiplier_rejects_boundary_and_bad_weights() {
    assert!(matches!(
        multiplier_estimate(&[-1.0, 0.0], &Reciprocal, 1.0),
        Err(Error::NotStrictlyFeasible { index: 1, .. })
    ));
    assert!(multiplier_estimate(&[-1.0], &Reciprocal, 0.0).is_err());
}

#[test]
fn primal_residual_examples() {
    assert_eq!(primal_residual(&[-1.0], &[0.0]), 0.0);
    assert_eq!(primal_residual(&[-0.5, -2.0], &[3.0, 0.1]), 0.5);
}

#[test]
fn inactive_constraint_yields_vanishing_multiplier() {
    let p = HalfSpace::with_quadratic(2);
    let outer = OuterParams { eps_p: 1.0, ..Default::default() };
    let mut trace = SolveTrace::default();
    let res = ip_solve(&p, &Reciprocal, &[0.0, 0.0], &outer, &InnerParams::default(), &mut trace).unwrap();
    assert_eq!(res.status, OuterStatus::Converged);
    // ε_k first drops to 1e-5 or below after nine updates by 1/4.
    assert_eq!(res.outer_iterations, 10);
    assert!(res.pair.dual_bound <= 1e-5);
    assert!(res.pair.y[0] <= 1e-5);
    assert!(norm(&res.pair.x) <= 1e-4);
}

#[test]
fn rosenbrock_from_default_start_reaches_upper_minimizer() {
    let p = rosenbrock_instance();
    let (res, _) = solve(&p, &[0.0, 1.05]);
    assert_eq!(res.status, OuterStatus::Converged);
    assert!(dist(&res.pair.x, &ROSENBROCK_MINIMIZERS[1]) <= 1e-2, "{:?}", res.pair.x);
    assert!(res.pair.primal_residual <= 1e-5);
    assert!(res.pair.dual_bound <= 1e-5);
    assert!(res.cost <= res.cost_start);
    let report = build_kkt_report(&res.pair, &p, &OuterParams::default()).unwrap();
    assert!(report.certified());
    assert!(report.rows[0].active);
    assert!(report.rows[0].y > 0.0);
}

#[test]
fn rejects_infeasible_start_and_bad_dimensions() {
    let p = rosenbrock_instance();
    let mut trace = SolveTrace::default();
    let err = ip_solve(&p, &Reciprocal, &[-0.25, 0.25], &OuterParams::default(), &InnerParams::default(), &mut trace);
    assert!(matches!(err, Err(Error::NotStrictlyFeasible { .. })));
    let err = ip_solve(&p, &Reciprocal, &[0.0], &OuterParams::default(), &InnerParams::default(), &mut trace);
    assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    let bad = OuterParams { eps_p: 0.0, ..Default::default() };
    assert!(ip_solve(&p, &Reciprocal, &[0.0, 1.05], &bad, &InnerParams::default(), &mut trace).is_err());
}

fn assert_outer_invariants(p: &dyn Problem, res: &IpResult, trace: &SolveTrace, outer: &OuterParams) {
    let mut prev_eps = f64::INFINITY;
    for (k, rec) in trace.outer.iter().enumerate() {
        assert_eq!(rec.outer_iter, k);
        assert_eq!(rec.mu_k, outer.mu0 * outer.theta_mu.powi(k as i32));
        assert!(rec.eps_k <= prev_eps);
        prev_eps = rec.eps_k;
        assert!(p.c(&rec.x).iter().all(|&c| c < 0.0));
        assert!(rec.y.iter().all(|&y| y >= 0.0));
        assert!(rec.inner_residual <= rec.eps_k);
        assert!(rec.cost <= rec.q_mu_new + SLACK);
        assert!(rec.q_mu_new <= rec.q_mu_start + SLACK);
        if let Some(prev) = rec.q_prev_mu_start {
            assert!(rec.q_mu_start <= prev + SLACK);
        }
        let fresh = eval_inner_objective(p, &Reciprocal, rec.mu_k, &rec.x).unwrap().to_f64();
        assert_eq!(fresh, rec.q_mu_new);
    }
    let certificate = recompose_dual_certificate(p, &res.pair).unwrap();
    assert!((certificate - res.pair.dual_residual).abs() <= 1e-8 * certificate.max(1.0));
    assert!(res.pair.dual_residual <= res.pair.dual_bound);
    let (first, last) = complementarity_span(trace).unwrap();
    assert!(last <= first);
    assert_eq!(multiplier_norms(trace).len(), trace.outer.len());
}

#[test]
fn outer_invariants_on_rosenbrock_and_boxes() {
    let outer = OuterParams::default();
    let starts: Vec<(Box<dyn Problem>, Vec<f64>)> = vec![
        (Box::new(rosenbrock_instance()), vec![0.0, 1.05]),
        (Box::new(rosenbrock_instance()), vec![0.8, 0.25]),
        (Box::new(rosenbrock_instance()), vec![-0.6, -0.3]),
        (lookup("qbox-2-7").unwrap(), vec![0.0; 2]),
        (lookup("qbox-4-3").unwrap(), vec![0.0; 4]),
    ];
    for (p, x0) in starts {
        let (res, trace) = solve(&*p, &x0);
        assert_eq!(res.status, OuterStatus::Converged);
        assert_eq!(trace.outer.len(), res.outer_iterations);
        // Nine tolerance updates are needed before the dual test can pass.
        assert!(res.outer_iterations >= 10);
        assert_outer_invariants(&*p, &res, &trace, &outer);
        let report = build_kkt_report(&res.pair, &*p, &outer).unwrap();
        assert_eq!(report.classification, KktClass::EpsKktCertified);
    }
}

#[test]
fn activity_flag_matches_geometry_at_lower_minimizer() {
    let p = Rosenbrock::default();
    let (res, _) = solve(&p, &[-0.6, -0.3]);
    assert!(dist(&res.pair.x, &ROSENBROCK_MINIMIZERS[0]) <= 1e-2, "{:?}", res.pair.x);
    let report = build_kkt_report(&res.pair, &p, &OuterParams::default()).unwrap();
    // Independent recomputation: distance to the excluded disk.
    let gap = dist(&res.pair.x, &p.center) - p.radius;
    let c = -gap * (gap + 2.0 * p.radius);
    assert!((c - report.rows[0].c).abs() <= 1e-12);
    let threshold = 10.0 * 1e-5;
    assert_eq!(report.rows[0].active, c.abs() <= threshold);
    assert!(report.rows[0].active, "x^[1] sits on the circle");
    assert!(gap <= threshold);
}

#[test]
fn solve_is_deterministic() {
    let p = rosenbrock_instance();
    let (a, ta) = solve(&p, &[0.3, 0.9]);
    let (b, tb) = solve(&p, &[0.3, 0.9]);
    assert_eq!(a.pair.x, b.pair.x);
    assert_eq!(a.grad_evals, b.grad_evals);
    assert_eq!(ta.inner.len(), tb.inner.len());
}

struct Slower;

impl Schedule for Slower {
    fn next_eps(&self, eps_k: f64, outer: &OuterParams) -> f64 {
        UpperBounds.next_eps(eps_k, outer)
    }
    fn next_mu(&self, mu_k: f64, outer: &OuterParams) -> f64 {
        0.5 * outer.theta_mu * mu_k
    }
}

struct Greedy;

impl Schedule for Greedy {
    fn next_eps(&self, eps_k: f64, _: &OuterParams) -> f64 {
        eps_k
    }
    fn next_mu(&self, mu_k: f64, outer: &OuterParams) -> f64 {
        outer.theta_mu * mu_k
    }
}

#[test]
fn custom_schedules_are_checked_for_admissibility() {
    let p = rosenbrock_instance();
    let mut trace = SolveTrace::default();
    let res = ip_solve_with(
        &p,
        &Reciprocal,
        &[0.0, 1.05],
        &OuterParams::default(),
        &InnerParams::default(),
        &Slower,
        &mut trace,
    )
    .unwrap();
    assert_eq!(res.status, OuterStatus::Converged);
    assert_eq!(trace.outer[2].mu_k, 0.125f64.powi(2));

    let err = ip_solve_with(
        &p,
        &Reciprocal,
        &[0.0, 1.05],
        &OuterParams::default(),
        &InnerParams::default(),
        &Greedy,
        &mut SolveTrace::default(),
    );
    assert!(matches!(err, Err(Error::InvalidParameter(_))));
}

#[test]
fn outer_cap_reports_best_pair() {
    let p = rosenbrock_instance();
    let outer = OuterParams { max_outer_iters: 3, ..Default::default() };
    let mut trace = SolveTrace::default();
    let res = ip_solve(&p, &Reciprocal, &[0.0, 1.05], &outer, &InnerParams::default(), &mut trace).unwrap();
    assert_eq!(res.status, OuterStatus::OuterIterationCap);
    assert_eq!(res.outer_iterations, 3);
    assert_eq!(res.pair.x, trace.outer[2].x);
    let report = build_kkt_report(&res.pair, &p, &OuterParams::default()).unwrap();
    assert_eq!(report.classification, KktClass::NotCertified);
}

#[test]
fn inner_failure_propagates_with_partial_trace() {
    let p = rosenbrock_instance();
    let inner = InnerParams { max_inner_iters: 5, ..Default::default() };
    let mut trace = SolveTrace::default();
    let res = ip_solve(&p, &Reciprocal, &[0.0, 1.05], &OuterParams::default(), &inner, &mut trace).unwrap();
    assert!(matches!(res.status, OuterStatus::InnerFailed(_)));
    assert!(!trace.inner.is_empty());
    assert!(p.c(&res.pair.x)[0] < 0.0);
}
