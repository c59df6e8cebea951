use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zharm::weights::{ap_constant, apq_constant};
use zharm::{weight_sum, Exponent, IntegerInterval, ScanRange, WeightSpec};

fn sums(c: &mut Criterion) {
    let w = WeightSpec::power(-0.3).unwrap();
    let j = IntegerInterval::new(-5000, 5000).unwrap();
    c.bench_function("weight_sum 10k", |b| {
        b.iter(|| weight_sum(black_box(&w), j, 1.7).unwrap())
    });
}

fn scans(c: &mut Criterion) {
    let w = WeightSpec::power(-0.4).unwrap();
    let mut g = c.benchmark_group("scan");
    g.sample_size(20);
    for n_max in [1u64 << 10, 1 << 14] {
        let scan = ScanRange::new(-16, 16, n_max).unwrap();
        g.bench_with_input(BenchmarkId::new("ap", n_max), &scan, |b, s| {
            b.iter(|| ap_constant(&w, 2.0, *s).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("apq", n_max), &scan, |b, s| {
            b.iter(|| apq_constant(&w, 1.0, Exponent::Finite(2.0), *s).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sums, scans);
criterion_main!(benches);
