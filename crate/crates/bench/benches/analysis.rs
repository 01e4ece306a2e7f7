//! Cost of the analysis primitives: exhaustive enumeration, occupancy
//! accumulation, autocorrelation estimation, and parameter quantization.

use criterion::{criterion_group, criterion_main, Criterion};
use pbit_bench::{enumerable_12, kings_16};
use pbit_core::analysis::{acf_from_trace, exact_distribution, occupancy_distribution};
use pbit_core::quantize::quantize;
use pbit_core::sampler::{ideal_params, run_async, InitPolicy};
use pbit_core::{AsyncConfig, StopRule};
use std::hint::black_box;

const LAMBDA0: f64 = 150e6;

fn analysis(c: &mut Criterion) {
    let small = enumerable_12();
    c.bench_function("oracle/enumerate-12", |b| {
        b.iter(|| black_box(exact_distribution(&small).unwrap().log_z()))
    });

    let params = ideal_params(small.n(), LAMBDA0);
    let cfg = AsyncConfig {
        stop: StopRule::MaxEvents(100_000),
        seed: 5,
        tau_circ: 0.0,
        init: InitPolicy::RandomUniform,
    };
    let trace = run_async(&small, &params, &cfg).unwrap();
    c.bench_function("analysis/occupancy-100k", |b| {
        b.iter(|| black_box(occupancy_distribution(&trace).unwrap()[0]))
    });
    c.bench_function("analysis/acf-100k", |b| {
        b.iter(|| black_box(acf_from_trace(&trace, 0, 4.0 * LAMBDA0, 200).unwrap().dt))
    });

    let grid = kings_16();
    c.bench_function("quantize/kings-16x16", |b| {
        b.iter(|| black_box(quantize(&grid, 8).unwrap().scale()))
    });
}

criterion_group!(benches, analysis);
criterion_main!(benches);
