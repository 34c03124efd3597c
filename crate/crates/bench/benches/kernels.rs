use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use friedel_core::analysis::fit_damped_cosine;
use friedel_core::dielectric::{epsilon_closed, epsilon_quadrature};
use friedel_core::potential::potential_numeric;
use friedel_core::QuadratureSpec;

fn permittivity(c: &mut Criterion) {
    c.bench_function("epsilon_closed", |b| {
        b.iter(|| epsilon_closed(black_box(1.3), black_box(1.0), black_box(0.05)))
    });
    c.bench_function("epsilon_quadrature", |b| {
        b.iter(|| epsilon_quadrature(black_box(1.3), black_box(1.0), black_box(0.05)))
    });
}

fn potential(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let mut group = c.benchmark_group("potential_numeric");
    group.sample_size(10);
    group.bench_function("R=20", |b| {
        b.iter(|| potential_numeric(black_box(20.0), 1.0, 0.05, &spec))
    });
    group.finish();
}

fn fit(c: &mut Criterion) {
    let profile = friedel_bench::fit_fixture();
    c.bench_function("fit_damped_cosine", |b| {
        b.iter(|| fit_damped_cosine(black_box(&profile)))
    });
}

criterion_group!(benches, permittivity, potential, fit);
criterion_main!(benches);
