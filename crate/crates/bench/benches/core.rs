use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fourier_bench::matrix;
use fourier_core::fourier::{canonical_form, enumerate_fourier, structure_constants, EnumerateOptions};
use fourier_core::groups::{character_table, symmetric_group};
use fourier_core::norms::enumerate_norm_vectors;
use fourier_core::qdouble::quantum_double;

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("norm_vectors");
    for n in [8, 10, 12] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate_norm_vectors(n).unwrap())
        });
    }
    g.finish();
}

fn enumerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for n in [6, 8, 9] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate_fourier(n, &EnumerateOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn matrices(c: &mut Criterion) {
    let m = matrix("dim18");
    c.bench_function("canonical_form/dim18", |b| b.iter(|| canonical_form(black_box(&m))));
    c.bench_function("structure_constants/dim18", |b| {
        b.iter(|| structure_constants(black_box(&m)).unwrap())
    });
}

fn groups(c: &mut Criterion) {
    let s4 = symmetric_group(4).unwrap();
    let s5 = symmetric_group(5).unwrap();
    c.bench_function("character_table/S5", |b| b.iter(|| character_table(black_box(&s5)).unwrap()));
    let mut g = c.benchmark_group("quantum_double");
    g.sample_size(10);
    g.bench_function("S4", |b| b.iter(|| quantum_double(black_box(&s4)).unwrap()));
    g.finish();
}

criterion_group!(benches, norms, enumerate, matrices, groups);
criterion_main!(benches);
