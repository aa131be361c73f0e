use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use morrey_bench::{random_batch, small_space, witnesses};
use morrey_core::{centered_norm, oracle_norm, sweep, QuotientKind};

fn bench_centered_norm(c: &mut Criterion) {
    let sp = small_space();
    let w = witnesses();
    c.bench_function("centered_norm/witness_l", |b| {
        b.iter(|| centered_norm(black_box(&w.l), &sp).unwrap().value)
    });

    let batch = random_batch(32);
    c.bench_function("centered_norm/corpus_batch_32", |b| {
        b.iter(|| {
            batch
                .iter()
                .map(|(f, sp)| centered_norm(black_box(f), sp).unwrap().value)
                .sum::<f64>()
        })
    });
}

fn bench_oracle_norm(c: &mut Criterion) {
    let sp = small_space();
    let w = witnesses();
    c.bench_function("oracle_norm/witness_l_1e-8", |b| {
        b.iter(|| oracle_norm(black_box(&w.l), &sp, 1e-8).unwrap().value)
    });
}

fn bench_sweep(c: &mut Criterion) {
    let sp = small_space();
    let eps: Vec<f64> = (1..=20).map(|k| 0.5f64.powi(k)).collect();
    c.bench_function("sweep/nj_20_points", |b| {
        b.iter(|| {
            sweep(QuotientKind::VonNeumannJordan, &sp, black_box(&eps), None)
                .unwrap()
                .len()
        })
    });
}

criterion_group!(benches, bench_centered_norm, bench_oracle_norm, bench_sweep);
criterion_main!(benches);
