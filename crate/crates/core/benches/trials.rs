use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use thermometry::estimators::{run_thermalizing_trials, EstimatorMode};
use thermometry::interferometry::{
    measure_fringe_visibility, run_interferometer_trials, BathMode, BathSpec, ProtocolConfig,
};
use thermometry::{Execution, InverseTemperature, TwoLevelSpec};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_thermalizing(c: &mut Criterion) {
    let spec = TwoLevelSpec::new(1000, 1.0).unwrap();
    let beta = InverseTemperature::new(1.0).unwrap();
    let trials = 20_000;
    let mut group = c.benchmark_group("thermalizing_trials");
    group.throughput(Throughput::Elements(trials));
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                run_thermalizing_trials(
                    &spec,
                    beta,
                    black_box(trials),
                    EstimatorMode::Jeffreys,
                    7,
                    exec,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_noon(c: &mut Criterion) {
    let m = 10_000;
    let bath = BathSpec::with_theta(
        m,
        1.0,
        InverseTemperature::new(1.0).unwrap(),
        (PI - 1e-3) / (32.0 * m as f64),
    )
    .unwrap();
    let config = ProtocolConfig::noon(bath, 32, 200, BathMode::SampledM);
    let trials = 20_000;
    let mut group = c.benchmark_group("noon_trials");
    group.throughput(Throughput::Elements(trials));
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_interferometer_trials(&config, black_box(trials), 7, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_fringe(c: &mut Criterion) {
    let bath =
        BathSpec::with_theta(50, 1.0, InverseTemperature::new(3f64.ln()).unwrap(), 0.05).unwrap();
    let shots = 50_000;
    let mut group = c.benchmark_group("dephasing_fringe");
    group.throughput(Throughput::Elements(shots));
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| measure_fringe_visibility(&bath, 3, black_box(shots), 7, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_thermalizing, bench_noon, bench_fringe
}
criterion_main!(benches);
