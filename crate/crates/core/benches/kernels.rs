use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linnik_core::arithmetic::{compute_rq, sieve_von_mangoldt, CesaroParams};
use linnik_core::formula::{m3_term, TruncationSpec};
use linnik_core::parallel::{chunked_sum, chunked_sum_seq, map_indexed, map_indexed_seq};
use linnik_core::specfun::{bessel_kernel, PrecisionConfig};
use linnik_core::zeros::bundled_zeros;
use linnik_core::Complex64;

fn work(i: usize) -> f64 {
    let x = i as f64 * 1e-3;
    (x.sin() * x.cos()).exp()
}

fn bessel_at(i: usize) -> Complex64 {
    let cfg = PrecisionConfig::default();
    let nu = Complex64::new(3.5, 14.134725 + i as f64);
    bessel_kernel(nu, 50.0 + i as f64, &cfg).unwrap().value
}

fn reductions(c: &mut Criterion) {
    let mut g = c.benchmark_group("chunked_sum");
    for len in [10_000usize, 1_000_000] {
        g.bench_with_input(BenchmarkId::new("parallel", len), &len, |b, &n| {
            b.iter(|| chunked_sum(black_box(n), 4096, work))
        });
        g.bench_with_input(BenchmarkId::new("sequential", len), &len, |b, &n| {
            b.iter(|| chunked_sum_seq(black_box(n), 4096, work))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("map_indexed_bessel");
    g.bench_function("parallel", |b| b.iter(|| map_indexed(black_box(64), bessel_at)));
    g.bench_function("sequential", |b| b.iter(|| map_indexed_seq(black_box(64), bessel_at)));
    g.finish();
}

fn tables(c: &mut Criterion) {
    let lam = sieve_von_mangoldt(4000).unwrap();
    c.bench_function("compute_rq/4000", |b| b.iter(|| compute_rq(&lam, black_box(4000)).unwrap()));
}

fn terms(c: &mut Criterion) {
    let zs = bundled_zeros();
    let p = CesaroParams::new(1000, 2.0).unwrap();
    let spec = TruncationSpec::auto(&p, &zs).unwrap();
    let cfg = PrecisionConfig::default();
    let mut g = c.benchmark_group("m3_term");
    g.sample_size(10);
    g.bench_function("N=1000", |b| b.iter(|| m3_term(black_box(&p), &zs, &spec, &cfg).unwrap()));
    g.finish();
}

criterion_group!(benches, reductions, tables, terms);
criterion_main!(benches);
