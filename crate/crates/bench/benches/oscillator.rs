use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use forced_oscillator::classical::{evolve, propagator};
use forced_oscillator::schrodinger::{momentum_representation, SplitOperator};
use forced_oscillator::transitions::{overlap_amplitude, overlap_quadrature_oracle, probability_row};
use forced_oscillator::{build_frame, DisplacementParams, ForcingSpec, GridSpec, OscillatorParams, PhaseState, WaveFunction};

fn unit() -> OscillatorParams {
    OscillatorParams::new(1.0, 1.0).unwrap()
}

fn classical(c: &mut Criterion) {
    let p = unit();
    c.bench_function("propagator", |b| b.iter(|| propagator(&p, black_box(1.234))));

    let mut g = c.benchmark_group("evolve");
    for (name, spec) in [
        ("constant", ForcingSpec::constant(1.0).unwrap()),
        ("sinusoid", ForcingSpec::sinusoid(1.0, 2.0, 0.3).unwrap()),
        ("pulse", ForcingSpec::pulse(1.0, 0.5, 2.5).unwrap()),
    ] {
        g.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, spec| {
            b.iter(|| evolve(&p, PhaseState::new(1.0, 0.0), spec, black_box(2.0 * PI), 1e-12))
        });
    }
    g.finish();

    c.bench_function("build_frame/101", |b| {
        b.iter(|| build_frame(p, ForcingSpec::sinusoid(1.0, 2.0, 0.3).unwrap(), 2.0 * PI, 101, 1e-12))
    });
}

fn transitions(c: &mut Criterion) {
    let d = DisplacementParams::new(1.3, -0.7);
    let mut g = c.benchmark_group("overlap_amplitude");
    for (n, m) in [(0, 0), (5, 8), (20, 25), (60, 40)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{n}-{m}")), &(n, m), |b, &(n, m)| {
            b.iter(|| overlap_amplitude(n, m, black_box(d)))
        });
    }
    g.finish();
    c.bench_function("overlap_quadrature_oracle/5-8", |b| b.iter(|| overlap_quadrature_oracle(5, 8, d, 120)));
    let frame = build_frame(unit(), ForcingSpec::constant(1.0).unwrap(), PI, 3, 1e-12).unwrap();
    c.bench_function("probability_row/n=3", |b| b.iter(|| probability_row(3, &frame, black_box(PI), 1e-12)));
}

fn schrodinger(c: &mut Criterion) {
    let p = unit();
    let grid = GridSpec::default_for(&p).unwrap();
    let psi0 = WaveFunction::eigenstate(&p, 0, grid).unwrap();
    let op = SplitOperator::laboratory(p, ForcingSpec::constant(1.0).unwrap(), &grid).unwrap();
    c.bench_function("split_operator/100_steps", |b| {
        b.iter_batched_ref(
            || psi0.clone(),
            |psi| op.advance(psi, 0.0, 100.0 * grid.dt),
            criterion::BatchSize::SmallInput,
        )
    });
    c.bench_function("momentum_representation/1024", |b| b.iter(|| momentum_representation(black_box(&psi0))));
}

criterion_group!(benches, classical, transitions, schrodinger);
criterion_main!(benches);
