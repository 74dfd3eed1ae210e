use std::hint::black_box;

use calogero_bench::{Fixture, ALGEBRAS};
use calogero_core::dynamics::{integrate, lax_identity_residual, IntegratorConfig};
use calogero_core::phase::invariant_brackets;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn dynamics(c: &mut Criterion) {
    let mut group = c.benchmark_group("dynamics");
    group.sample_size(10);
    // one unit of time at the default step; larger algebras are slow enough
    // that the sweep stops at sl(2)^3
    let cfg = IntegratorConfig {
        step: 1e-2,
        t_end: 1.0,
        ..Default::default()
    };
    for name in &ALGEBRAS[..4] {
        let fx = Fixture::new(name);
        group.bench_with_input(
            BenchmarkId::new("integrate_t1", name),
            &fx.constrained,
            |b, pt| b.iter(|| integrate(fx.r.as_ref(), black_box(pt), &cfg).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("lax_identity", name),
            &fx.constrained,
            |b, pt| b.iter(|| lax_identity_residual(fx.r.as_ref(), black_box(pt)).unwrap()),
        );
    }
    let fx = Fixture::new("sl3");
    group.bench_function("invariant_brackets_sl3", |b| {
        b.iter(|| invariant_brackets(fx.r.as_ref(), black_box(&fx.constrained), 3).unwrap())
    });
    group.finish();
}

criterion_group!(benches, dynamics);
criterion_main!(benches);
