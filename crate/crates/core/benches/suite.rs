use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geopoly_core::suite::{run_all, run_with, Profile, RunOptions};
use geopoly_core::{Execution, IdentityId};

fn quick_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("quick_suite");
    group.sample_size(10);
    for execution in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{execution:?}")),
            &execution,
            |b, &e| b.iter(|| run_all(1, Profile::Quick, e)),
        );
    }
    group.finish();
}

fn sampled_identity(c: &mut Criterion) {
    let mut group = c.benchmark_group("gf_vs_table_20_samples");
    group.sample_size(10);
    for execution in [Execution::Sequential, Execution::Parallel] {
        let opts = RunOptions {
            execution,
            ..RunOptions::default()
        };
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{execution:?}")),
            &opts,
            |b, opts| b.iter(|| run_with(IdentityId::GF_VS_TABLE, 7, 20, opts).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, quick_suite, sampled_identity);
criterion_main!(benches);
