use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dualgap_core::device::{trace_cv_curve_with, DualGapDesign, SweepOptions};
use dualgap_core::profile::{reflow_batch, ProfileParams, ResistStack, ThermalCycle};
use dualgap_core::{Execution, LumpedActuator};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn cv_sweep(c: &mut Criterion) {
    let design = DualGapDesign::paper_device();
    let mut group = c.benchmark_group("cv_sweep");
    for (name, execution) in MODES {
        for n in [1_000usize, 20_000] {
            let opts = SweepOptions {
                adaptive: true,
                execution,
            };
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| trace_cv_curve_with(black_box(&design), 12.0, n, &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn equilibrium_batch(c: &mut Criterion) {
    let a = LumpedActuator::new(1.511, 4.5e-6, 3.2e-8, dualgap_core::VACUUM_PERMITTIVITY).unwrap();
    let v_pi = a.pull_in_voltage();
    let voltages: Vec<f64> = (0..50_000).map(|i| v_pi * i as f64 / 50_000.0).collect();
    let mut group = c.benchmark_group("equilibrium_batch");
    for (name, execution) in MODES {
        group.bench_function(name, |b| b.iter(|| a.solve_many(execution, black_box(&voltages))));
    }
    group.finish();
}

fn profile_batch(c: &mut Criterion) {
    let stacks: Vec<ResistStack> = (0..64)
        .map(|i| ResistStack::flat(vec![4.5e-6], (100.0 + 15.0 * i as f64) * 1e-6).unwrap())
        .collect();
    let cycle = ThermalCycle::new(200.0).unwrap();
    let params = ProfileParams::default();
    let mut group = c.benchmark_group("reflow_batch");
    for (name, execution) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| reflow_batch(execution, black_box(&stacks), &cycle, &params, 2001).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cv_sweep, equilibrium_batch, profile_batch);
criterion_main!(benches);
