use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

use dmirror_core::{
    eof, integrate_adaptive, kummer_m, overlaps, CovarianceMatrix, DiamondScale, Direction,
    WavepacketSpec, EOF_DEFAULT_TOL,
};

fn bench_kummer(c: &mut Criterion) {
    let b = Complex64::new(2.0, 0.0);
    let a = Complex64::new(1.0, 1.5);
    c.bench_function("kummer_taylor_f64 |z|=6", |bench| {
        bench.iter(|| kummer_m(black_box(a), b, Complex64::new(0.0, -6.0)).unwrap())
    });
    c.bench_function("kummer_taylor_dd |z|=30", |bench| {
        bench.iter(|| kummer_m(black_box(a), b, Complex64::new(0.0, -30.0)).unwrap())
    });
    c.bench_function("kummer_asymptotic |z|=150", |bench| {
        bench.iter(|| kummer_m(black_box(a), b, Complex64::new(0.0, -150.0)).unwrap())
    });
}

fn bench_quadrature(c: &mut Criterion) {
    c.bench_function("gk15_oscillatory_gaussian", |bench| {
        bench.iter(|| {
            integrate_adaptive(
                |x| Complex64::new(0.0, 5.0 * x).exp() * (-(x - 3.0) * (x - 3.0)).exp(),
                black_box(0.0),
                20.0,
                1e-12,
                1e-10,
            )
            .unwrap()
        })
    });
}

fn bench_overlaps(c: &mut Criterion) {
    let scale = DiamondScale::new(1.0).unwrap();
    let g = WavepacketSpec::diamond(Direction::Left, 1.0, 0.2).unwrap();
    let f = WavepacketSpec::minkowski(Direction::Left, 12.0, 3.2, 2.0).unwrap();
    c.bench_function("overlaps_fig2_point", |bench| {
        bench.iter(|| overlaps(black_box(&f), &g, scale).unwrap())
    });
}

fn bench_eof(c: &mut Criterion) {
    let cm = CovarianceMatrix::two_mode_squeezed(0.5).with_added_noise(0.4);
    c.bench_function("eof_mixed_state", |bench| {
        bench.iter(|| eof(black_box(&cm), EOF_DEFAULT_TOL).unwrap())
    });
}

criterion_group!(benches, bench_kummer, bench_quadrature, bench_overlaps, bench_eof);
criterion_main!(benches);
