use std::hint::black_box;

use bogoliubov::atom::{hartree_scf, GridConfig, RadialGrid, ScfOptions};
use bogoliubov::coherent::{bogoliubov_energy, BogoliubovTrial, ManyBodyCoefficients};
use bogoliubov::quadratic::ground_energy;
use bogoliubov::quasifree::{wick_expectation, GenOp};
use bogoliubov::sampling::{random_admissible, random_hermitian, random_positive_quadratic};
use bogoliubov::symplectic::diagonalize_onepdm;
use bogoliubov::{CVec, Tensor4, C64};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vec(r: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

fn onepdm_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("onepdm");
    for m in [2, 8, 32] {
        let mut r = ChaCha8Rng::seed_from_u64(m as u64);
        let p = random_admissible(&mut r, m);
        g.bench_with_input(BenchmarkId::new("diagonalize", m), &p, |b, p| {
            b.iter(|| diagonalize_onepdm(black_box(p), 1e-9).unwrap())
        });
        let h = random_positive_quadratic(&mut r, m, 0.1, 0.7);
        g.bench_with_input(BenchmarkId::new("ground_energy", m), &h, |b, h| {
            b.iter(|| ground_energy(black_box(h)).unwrap())
        });
    }
    g.finish();
}

fn wick(c: &mut Criterion) {
    let mut g = c.benchmark_group("wick_expectation");
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let p = random_admissible(&mut r, 3);
    for degree in [2, 4, 6, 8] {
        let ops: Vec<GenOp> = (0..degree).map(|_| GenOp::new(random_vec(&mut r, 6))).collect();
        g.bench_with_input(BenchmarkId::from_parameter(degree), &ops, |b, ops| {
            b.iter(|| wick_expectation(&p, black_box(ops)).unwrap())
        });
    }
    g.finish();
}

fn energy(c: &mut Criterion) {
    let mut g = c.benchmark_group("bogoliubov_energy");
    for m in [2, 6, 12] {
        let mut r = ChaCha8Rng::seed_from_u64(100 + m as u64);
        let raw = random_vec(&mut r, m * m * m * m);
        let w = Tensor4::from_fn(m, |a, b, p, q| {
            let at = |a: usize, b: usize, p: usize, q: usize| raw[((a * m + b) * m + p) * m + q];
            (at(a, b, p, q) + at(b, a, q, p) + at(q, p, b, a).conj() + at(p, q, a, b).conj()) * 0.25
        });
        let coef = ManyBodyCoefficients::new(random_hermitian(&mut r, m), w).unwrap();
        let trial = BogoliubovTrial::new(random_admissible(&mut r, m), random_vec(&mut r, m)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(m), &trial, |b, t| {
            b.iter(|| bogoliubov_energy(black_box(t), &coef).unwrap())
        });
    }
    g.finish();
}

fn atom(c: &mut Criterion) {
    let grid = RadialGrid::new(GridConfig {
        points: 400,
        rmax: 2000.0,
        r0: 0.002,
    })
    .unwrap();
    let opts = ScfOptions::default();
    let sol = hartree_scf(1.0, &grid, &opts).unwrap();
    let mut g = c.benchmark_group("atom");
    g.sample_size(20);
    g.bench_function("hartree_scf_400", |b| b.iter(|| hartree_scf(black_box(1.0), &grid, &opts).unwrap()));
    let op = sol.mean_field(&grid, 0);
    g.bench_function("mean_field_lowest_pair_400", |b| b.iter(|| black_box(&op).lowest(2).unwrap()));
    g.finish();
}

criterion_group!(benches, onepdm_kernels, wick, energy, atom);
criterion_main!(benches);
