use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ralt_bench::{busy_scenario, small_sweep};
use ralt_core::compliance::{run_sweep, AccuracyTable};
use ralt_core::fmcw::{estimate_altitude, synthesize_dechirped};
use ralt_core::{scenarios, BasebandInterference, EchoChannel};

fn signal_chain(c: &mut Criterion) {
    let s = scenarios::clean();
    let ch = EchoChannel::new(150.0, s.terrain_reflectivity_loss_db).unwrap();
    let none = BasebandInterference::default();
    let samples = synthesize_dechirped(&s.chirp, &ch, &s.receiver, s.filter.as_ref(), &none, 1).unwrap();

    c.bench_function("synthesize", |b| {
        b.iter(|| synthesize_dechirped(&s.chirp, &ch, &s.receiver, s.filter.as_ref(), &none, black_box(1)).unwrap())
    });
    c.bench_function("estimate", |b| {
        b.iter(|| estimate_altitude(black_box(&samples), &s.chirp, &s.receiver).unwrap())
    });
}

fn trials(c: &mut Criterion) {
    let clean = scenarios::clean();
    let busy = busy_scenario();
    c.bench_function("run_trial/clean", |b| b.iter(|| clean.run_trial(black_box(500.0), 7).unwrap()));
    c.bench_function("run_trial/interfered", |b| b.iter(|| busy.run_trial(black_box(500.0), 7).unwrap()));
}

fn sweeps(c: &mut Criterion) {
    let table = AccuracyTable::default();
    let s = small_sweep(&scenarios::clean(), 20);
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("spot_altitudes_x20", |b| b.iter(|| run_sweep(black_box(&s), &table).unwrap()));
    g.finish();
}

criterion_group!(benches, signal_chain, trials, sweeps);
criterion_main!(benches);
