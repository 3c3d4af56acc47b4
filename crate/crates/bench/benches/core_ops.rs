//! Benchmarks for the hot paths: group construction, parameter recovery,
//! the surface invariant, and fiber statistics.

use cremona_bench::{sample_index_set, sample_surface};
use cremona_core::conjclass::{build_gi, recover_i};
use cremona_core::delpezzo::{choose_zeta, fiber_statistics, jmap, pencil_singular};
use cremona_core::field::{FieldElement, FieldKind};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_build_gi(c: &mut Criterion) {
    let index = sample_index_set();
    c.bench_function("build_gi_f101", |b| {
        b.iter(|| build_gi(black_box(&index)).expect("the standard group exists"))
    });
}

fn bench_recover_i(c: &mut Criterion) {
    let group = build_gi(&sample_index_set()).expect("the standard group exists");
    c.bench_function("recover_i_f101", |b| {
        b.iter(|| recover_i(black_box(&group)).expect("the parameters are readable"))
    });
}

fn bench_jmap_grid(c: &mut Criterion) {
    let kind = FieldKind::prime(103).expect("103 is prime");
    let zeta = choose_zeta(103).expect("103 = 1 mod 6");
    let points: Vec<FieldElement> = (3..23)
        .map(|v| FieldElement::from_integer(&kind, v))
        .collect();
    c.bench_function("jmap_grid_f103", |b| {
        b.iter(|| {
            for alpha in &points {
                black_box(jmap(black_box(alpha), &zeta).expect("points are admissible"));
            }
        })
    });
}

fn bench_pencil_singular(c: &mut Criterion) {
    let dp = sample_surface();
    c.bench_function("pencil_singular_qq", |b| {
        b.iter(|| pencil_singular(black_box(&dp)).expect("the pencil has five singular members"))
    });
}

fn bench_fiber_statistics(c: &mut Criterion) {
    c.bench_function("fiber_statistics_f31", |b| {
        b.iter(|| fiber_statistics(black_box(31)).expect("31 = 1 mod 6"))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_build_gi, bench_recover_i, bench_jmap_grid, bench_pencil_singular, bench_fiber_statistics
}
criterion_main!(benches);
