use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use twistpair::pairs::{enumerate_normalisers, Mode};
use twistpair_bench::{cyclic_group_ring, matrix_algebra, matrix_pair};

fn convolution(c: &mut Criterion) {
    for n in [3, 5] {
        let alg = matrix_algebra(n, 3);
        let f: Vec<u8> = (0..n * n).map(|i| (i % 3) as u8).collect();
        let g: Vec<u8> = (0..n * n).map(|i| ((i + 1) % 3) as u8).collect();
        c.bench_function(&format!("convolve full_relation({n}) over GF(3)"), |b| {
            b.iter(|| alg.convolve_coeffs(black_box(&f), black_box(&g)))
        });
    }
}

fn minimal_normalisers(c: &mut Criterion) {
    for (n, q) in [(2, 3), (3, 2)] {
        let p = matrix_pair(n, q);
        c.bench_function(&format!("minimal normalisers M{n}(GF({q}))"), |b| {
            b.iter(|| enumerate_normalisers(black_box(&p), Mode::Minimal).unwrap())
        });
    }
}

fn units(c: &mut Criterion) {
    for (p, k, m) in [(2, 2, 2), (3, 1, 3)] {
        let ring = cyclic_group_ring(p, k, m);
        c.bench_function(&format!("units of GF({p}^{k})[Z/{m}]"), |b| {
            b.iter(|| ring.enumerate_units(u64::MAX).unwrap())
        });
    }
}

criterion_group!(benches, convolution, minimal_normalisers, units);
criterion_main!(benches);
