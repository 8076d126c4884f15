use std::hint::black_box;

use blochsim_core::circuit::{build_trotter_step, build_two_particle_step};
use blochsim_core::evolve::{make_initial, run, EvolutionPlan, InitialKind, Stepper};
use blochsim_core::oracle::dense::{self, SpectralPropagator};
use blochsim_core::transpile::decompose;
use blochsim_core::{ModelParams, Statevector};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn trotter_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("trotter_step_apply");
    for gamma in [3usize, 6, 10] {
        let p = ModelParams::reference(1 << gamma).unwrap();
        let step = build_trotter_step(&p, 0.02, 0.02).unwrap();
        let mut sv = Statevector::basis(1, gamma, 2).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(gamma), &step, |b, step| b.iter(|| step.apply(black_box(&mut sv)).unwrap()));
    }
    group.finish();
}

fn two_particle_step(c: &mut Criterion) {
    let p = ModelParams::reference(16).unwrap().with_interaction(10.0);
    let step = build_two_particle_step(&p, 0.02, 0.02).unwrap();
    let mut sv = Statevector::basis(1, 8, 1 << 4 | 2).unwrap();
    c.bench_function("two_particle_step_apply/N=16", |b| b.iter(|| step.apply(black_box(&mut sv)).unwrap()));
}

fn dense_propagator(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense_propagator");
    for n in [16usize, 64, 128] {
        let p = ModelParams::reference(n).unwrap();
        let h = dense::h_sv(&p, 0.0);
        group.bench_with_input(BenchmarkId::new("diagonalize", n), &h, |b, h| b.iter(|| SpectralPropagator::new(black_box(h)).unwrap()));
        let prop = SpectralPropagator::new(&h).unwrap();
        let psi = make_initial(InitialKind::Spike { site: n / 2 }, &p).unwrap();
        group.bench_with_input(BenchmarkId::new("apply", n), &prop, |b, prop| b.iter(|| prop.apply(black_box(psi.amplitudes()), 0.02)));
    }
    group.finish();
}

fn rk4_run(c: &mut Criterion) {
    let p = ModelParams::reference(64).unwrap().with_ac_field(0.5, 2.0);
    let psi = make_initial(InitialKind::Gaussian, &p).unwrap();
    let plan = EvolutionPlan::new(0.01, 100, Stepper::OdeRk4).unwrap();
    c.bench_function("ode_rk4/N=64,100_steps", |b| b.iter(|| run(black_box(&psi), &p, &plan).unwrap()));
}

fn transpile(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose_trotter_step");
    for gamma in [3usize, 5] {
        let step = build_trotter_step(&ModelParams::reference(1 << gamma).unwrap(), 0.02, 0.02).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(gamma), &step, |b, step| b.iter(|| decompose(black_box(step)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, trotter_step, two_particle_step, dense_propagator, rk4_run, transpile);
criterion_main!(benches);
