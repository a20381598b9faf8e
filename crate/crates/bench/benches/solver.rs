use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use iprox::barrier::Reciprocal;
use iprox::problems::{quadratic_box_instance, rosenbrock_instance};
use iprox::prox::{prox_box_indicator, prox_half_quasinorm, prox_l1};
use iprox::{ip_solve, ipfb_solve, InnerParams, NoTrace, OuterParams};
use iprox_bench::prox_inputs;

fn proxes(c: &mut Criterion) {
    let mut group = c.benchmark_group("prox");
    for n in [16usize, 1024] {
        let (x, gamma) = prox_inputs(n, 7);
        let lo = vec![-1.0; n];
        let hi = vec![1.0; n];
        group.bench_with_input(BenchmarkId::new("half_quasinorm", n), &x, |b, x| {
            b.iter(|| prox_half_quasinorm(black_box(x), gamma).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("l1", n), &x, |b, x| {
            b.iter(|| prox_l1(black_box(x), gamma, 1.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("box", n), &x, |b, x| {
            b.iter(|| prox_box_indicator(black_box(x), &lo, &hi).unwrap())
        });
    }
    group.finish();
}

fn inner_solve(c: &mut Criterion) {
    let p = rosenbrock_instance();
    let params = InnerParams::default();
    c.bench_function("inner/rosenbrock mu=1 eps=1e-3", |b| {
        b.iter(|| ipfb_solve(&p, &Reciprocal, black_box(&[0.0, 1.05]), 1.0, 1e-3, &params, &mut NoTrace).unwrap())
    });
}

fn full_solve(c: &mut Criterion) {
    let outer = OuterParams::default();
    let inner = InnerParams::default();
    let mut group = c.benchmark_group("ip_solve");
    group.sample_size(20);
    let p = rosenbrock_instance();
    group.bench_function("rosenbrock from (0, 1.05)", |b| {
        b.iter(|| ip_solve(&p, &Reciprocal, black_box(&[0.0, 1.05]), &outer, &inner, &mut NoTrace).unwrap())
    });
    let q = quadratic_box_instance(4, 1).unwrap();
    group.bench_function("qbox-4-1", |b| {
        b.iter(|| ip_solve(&q, &Reciprocal, black_box(&[0.0; 4]), &outer, &inner, &mut NoTrace).unwrap())
    });
    group.finish();
}

criterion_group!(benches, proxes, inner_solve, full_solve);
criterion_main!(benches);
