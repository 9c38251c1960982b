use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use multisplit_bench::cd_fixture;
use multisplit_core::iteration::{iteration_matrix, multisplit_run, SolveConfig};
use multisplit_core::linalg::spectral_radius;
use multisplit_core::problems::random_npd;

fn bench_engine_workers(c: &mut Criterion) {
    let (_, ms, b) = cd_fixture(256);
    let mut group = c.benchmark_group("multisplit_run_n256_m4");
    group.sample_size(10);
    for workers in [1usize, 4] {
        group.bench_with_input(
            BenchmarkId::from_parameter(workers),
            &workers,
            |bench, &workers| {
                let cfg = SolveConfig {
                    tol: 1e-6,
                    max_iter: 200,
                    workers,
                    ..Default::default()
                };
                bench.iter(|| {
                    let report = multisplit_run(black_box(&ms), black_box(&b), &cfg).unwrap();
                    black_box(report.iterates_used)
                });
            },
        );
    }
    group.finish();
}

fn bench_assembly_and_spectrum(c: &mut Criterion) {
    let (_, ms, _) = cd_fixture(128);
    c.bench_function("iteration_matrix_n128_m4", |bench| {
        bench.iter(|| black_box(iteration_matrix(black_box(&ms)).unwrap()))
    });

    let a = random_npd(128, 0.8, 7);
    c.bench_function("spectral_radius_n128", |bench| {
        bench.iter(|| black_box(spectral_radius(black_box(&a)).unwrap()))
    });
}

criterion_group!(benches, bench_engine_workers, bench_assembly_and_spectrum);
criterion_main!(benches);
