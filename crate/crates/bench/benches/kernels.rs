use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tristep_bench::{index_one, laplace_triple};
use tristep_core::scheme::sweep;
use tristep_core::{
    alternating_iteration_matrix, group_inverse, spectral_radius, ToleranceProfile, Vector,
};

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    for grid in [11, 21] {
        let (splits, b) = laplace_triple(grid);
        let x = Vector::zeros(b.len());
        for steps in 1..=3 {
            group.bench_with_input(
                BenchmarkId::new(format!("{steps}-step"), b.len()),
                &splits[..steps],
                |bench, s| bench.iter(|| sweep(black_box(s), &x, &b)),
            );
        }
    }
    group.finish();
}

fn group_inverses(c: &mut Criterion) {
    let tol = ToleranceProfile::default();
    let mut group = c.benchmark_group("group_inverse");
    for n in [10, 50, 100] {
        let a = index_one(n, 42);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |bench, a| {
            bench.iter(|| group_inverse(black_box(a), &tol).unwrap())
        });
    }
    group.finish();
}

fn spectral_radii(c: &mut Criterion) {
    let tol = ToleranceProfile::default();
    let mut group = c.benchmark_group("spectral_radius");
    group.sample_size(10);
    for grid in [11, 21] {
        let (splits, _) = laplace_triple(grid);
        let h = alternating_iteration_matrix(&splits, &tol).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(h.nrows()), &h, |bench, h| {
            bench.iter(|| spectral_radius(black_box(h)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps, group_inverses, spectral_radii);
criterion_main!(benches);
