//! Throughput of the sample-parallel verification suites: the rayon path
//! against the sequential baseline on identical seeded workloads, for both
//! scalar backends.

use chiralform::geometry::{Chirality, Geometry};
use chiralform::par::ExecMode;
use chiralform::scalar::Exact;
use chiralform::suites::{RunSettings, run_suite};
use criterion::{Criterion, criterion_group, criterion_main};

fn settings(geom: Geometry, mode: ExecMode, n: usize) -> RunSettings {
    let mut s = RunSettings::new(geom);
    s.n_samples = n;
    s.ccr_pairs = 2;
    s.mode = mode;
    s
}

fn bench_suites(c: &mut Criterion) {
    let geom = Geometry::cylinder(Chirality::Plus);
    for suite in ["greens_identities", "difference_identity", "regions_oracle"] {
        let mut group = c.benchmark_group(suite);
        group.sample_size(10);
        group.bench_function("sequential_exact", |b| {
            b.iter(|| {
                let rep = run_suite::<Exact>(
                    suite,
                    &settings(geom.clone(), ExecMode::Sequential, 24),
                )
                .unwrap();
                assert!(rep.pass);
            })
        });
        group.bench_function("parallel_exact", |b| {
            b.iter(|| {
                let rep = run_suite::<Exact>(
                    suite,
                    &settings(geom.clone(), ExecMode::Parallel, 24),
                )
                .unwrap();
                assert!(rep.pass);
            })
        });
        group.bench_function("sequential_float", |b| {
            b.iter(|| {
                let rep = run_suite::<f64>(
                    suite,
                    &settings(geom.clone(), ExecMode::Sequential, 24),
                )
                .unwrap();
                assert!(rep.pass);
            })
        });
        group.bench_function("parallel_float", |b| {
            b.iter(|| {
                let rep = run_suite::<f64>(
                    suite,
                    &settings(geom.clone(), ExecMode::Parallel, 24),
                )
                .unwrap();
                assert!(rep.pass);
            })
        });
        group.finish();
    }
}

criterion_group!(benches, bench_suites);
criterion_main!(benches);
