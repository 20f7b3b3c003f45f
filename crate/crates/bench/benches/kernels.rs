use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nilprox_bench::{gaussian, multisets};
use nilprox_core::kahan::build_kahan;
use nilprox_core::linalg::{op_norm, schur_form};
use nilprox_core::uhf_tower::bottleneck_match_values;
use std::hint::black_box;

fn op_norm_bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("op_norm");
    for n in [32, 128, 256] {
        let m = gaussian(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| op_norm(black_box(m))));
    }
    g.finish();
}

fn schur_bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("schur");
    g.sample_size(10);
    for n in [32, 96] {
        let m = gaussian(n, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| schur_form(black_box(m)).unwrap()));
    }
    g.finish();
}

fn bottleneck_bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("bottleneck");
    g.sample_size(10);
    for n in [48, 192] {
        let (a, b) = multisets(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &(a, b), |bch, (a, b)| {
            bch.iter(|| bottleneck_match_values(black_box(a), black_box(b)).unwrap())
        });
    }
    g.finish();
}

fn kahan_bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("kahan_build");
    g.sample_size(10);
    for n in [64, 256] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let p = build_kahan(n).unwrap();
                p.witness_defect()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, op_norm_bench, schur_bench, bottleneck_bench, kahan_bench);
criterion_main!(benches);
