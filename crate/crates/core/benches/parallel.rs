use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use grasscs_core::entropy::wehrl_entropy_mc;
use grasscs_core::grassmann::{IrrepLabel, StateVector};
use grasscs_core::integration::{mc_integrate, stream_rng};
use grasscs_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn mc_volume(c: &mut Criterion) {
    let lambda = IrrepLabel::new(2).unwrap();
    let mut g = c.benchmark_group("mc_integrate");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 200_000), &exec, |b, &exec| {
            b.iter(|| mc_integrate(lambda, |p| p.vartheta_plus.cos().powi(2), 200_000, 7, exec).unwrap())
        });
    }
    g.finish();
}

fn wehrl_mc(c: &mut Criterion) {
    let lambda = IrrepLabel::new(3).unwrap();
    let psi = StateVector::random(lambda, &mut stream_rng(11, 0));
    let mut g = c.benchmark_group("wehrl_entropy_mc");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 100_000), &exec, |b, &exec| {
            b.iter(|| wehrl_entropy_mc(&psi, 100_000, 3, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, mc_volume, wehrl_mc);
criterion_main!(benches);
