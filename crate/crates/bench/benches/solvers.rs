use std::hint::black_box;

use adaprox::geometry::{BregmanFunction, BregmanKind, DomainSpec, MetricKind, MirrorGeometry};
use adaprox::prelude::*;
use criterion::{criterion_group, criterion_main, Criterion};

fn steps(c: &mut Criterion) {
    let bilinear = make_bilinear_random_saddle(10, 0, 0.5, 1.0).unwrap();
    let x1 = bilinear.domain.center();
    c.bench_function("eg_step/bilinear_d10", |b| {
        let mut state = SolverState::new(
            x1.clone(),
            StepPolicy::new(StepKind::Constant(0.05)).unwrap(),
        );
        let mut oracle = &bilinear;
        b.iter(|| eg_step(&mut state, &mut oracle, &bilinear.domain).unwrap())
    });

    let loads = make_resource_allocation(vec![2.0, 2.0, 2.0], 3.0, 0.0).unwrap();
    let transformed = to_transformed_coordinates(&loads).unwrap();
    let geometry = MirrorGeometry::from_kinds(
        MetricKind::InverseBox,
        BregmanKind::InverseBarrier,
        transformed.domain.clone(),
    )
    .unwrap();
    c.bench_function("adaprox_step/barrier_resource_d3", |b| {
        let mut state = SolverState::new(vec![0.3, 0.5, 0.7], StepPolicy::adaptive());
        let mut oracle = &transformed;
        b.iter(|| adaprox_step(&mut state, &mut oracle, &geometry).unwrap())
    });
}

fn prox(c: &mut Criterion) {
    let h = BregmanFunction::inverse_barrier(
        DomainSpec::transformed_capacity_simplex(vec![1.0, 2.0, 3.0, 4.0], 5.0).unwrap(),
    )
    .unwrap();
    let x = h.domain().center();
    let y = [0.7, -1.3, 2.1, -0.4];
    c.bench_function("capacity_prox/d4", |b| {
        b.iter(|| h.prox(black_box(&x), black_box(&y)).unwrap())
    });
}

fn merit(c: &mut Criterion) {
    let sign = make_sign_field(4, 1.0, vec![0.3, -0.2, 0.1, 0.0], 1.0).unwrap();
    let test = TestDomain::full_box();
    let candidate = [0.5, 0.1, -0.3, 0.2];
    c.bench_function("restricted_gap/sign_d4", |b| {
        b.iter(|| restricted_gap(&sign, &test, black_box(&candidate)).unwrap())
    });
}

criterion_group!(benches, steps, prox, merit);
criterion_main!(benches);
