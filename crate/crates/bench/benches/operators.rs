use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zharm::harness::{Generator, InputFamily};
use zharm::operators::{maximal_centered, operator_profile};
use zharm::{IntegerInterval, Kind};

fn profiles(c: &mut Criterion) {
    let fam = InputFamily::new(Generator::Random, 5).with_sizes(64, 64, 8.0);
    let x = fam.case(0);
    let mut g = c.benchmark_group("profile");
    for radius in [256i64, 2048] {
        let w = IntegerInterval::new(-radius, radius).unwrap();
        for kind in [Kind::Centered, Kind::Noncentral, Kind::Riesz] {
            g.bench_with_input(BenchmarkId::new(format!("{kind:?}"), radius), &w, |b, w| {
                b.iter(|| operator_profile(black_box(&x), 0.5, *w, kind).unwrap())
            });
        }
    }
    g.finish();
}

fn pointwise(c: &mut Criterion) {
    let mut g = c.benchmark_group("maximal_centered");
    for len in [16usize, 256] {
        let x = InputFamily::new(Generator::Random, 9)
            .with_sizes(len, 0, 8.0)
            .case(3);
        g.bench_with_input(BenchmarkId::from_parameter(len), &x, |b, x| {
            b.iter(|| maximal_centered(black_box(x), 0.3, 1000).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, profiles, pointwise);
criterion_main!(benches);
