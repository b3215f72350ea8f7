use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cws_bench::{cases, limits};
use cws_core::detection_set;

fn detection(c: &mut Criterion) {
    let lim = limits();
    let mut group = c.benchmark_group("detection_set");
    for (label, spec, delta) in cases() {
        group.bench_with_input(BenchmarkId::from_parameter(&label), &spec, |b, s| {
            b.iter(|| detection_set(s, delta, &lim).expect("detection set"))
        });
    }
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let lim = limits();
    let mut group = c.benchmark_group("canonicalize");
    for (label, spec, delta) in cases() {
        group.bench_with_input(BenchmarkId::from_parameter(&label), &spec, |b, s| {
            b.iter(|| s.canonicalize(delta, &lim).expect("canonical form"))
        });
    }
    group.finish();
}

criterion_group!(benches, detection, canonical);
criterion_main!(benches);
