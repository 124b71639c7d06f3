use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ouselect::risklab::{mc_risk, simulate_moments, EstimatorSpec, MonteCarlo, SigmaChoice};
use ouselect::signals::catalogue;
use ouselect::{Execution, NoiseParams};

fn backends() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn risk_replicates(c: &mut Criterion) {
    let signal = catalogue("expcos").unwrap();
    let params = NoiseParams::reference();
    let est = EstimatorSpec::Selected {
        sigma: SigmaChoice::Estimated,
        rho: None,
    };
    let mut group = c.benchmark_group("mc_risk_n100");
    group.sample_size(10);
    for (name, exec) in backends() {
        let mc = MonteCarlo::new(100, 1, 1.0 / 128.0).with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &mc, |b, mc| {
            b.iter(|| mc_risk(&signal, &params, 100, &est, mc).unwrap())
        });
    }
    group.finish();
}

fn moment_replicates(c: &mut Criterion) {
    let params = NoiseParams::reference();
    let mut group = c.benchmark_group("moments_n20");
    group.sample_size(10);
    for (name, exec) in backends() {
        let mc = MonteCarlo::new(500, 2, 1.0 / 256.0).with_execution(exec);
        group.bench_with_input(BenchmarkId::from_parameter(name), &mc, |b, mc| {
            b.iter(|| simulate_moments(&params, 20, &[1, 2, 3, 4], true, mc).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, risk_replicates, moment_replicates);
criterion_main!(benches);
