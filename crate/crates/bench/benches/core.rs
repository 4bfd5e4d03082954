use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use dr2_core::chow::{expand, FormalExpr, MONOMIAL_COUNT};
use dr2_core::ct;
use dr2_core::{q, reduce_to_basis, solve_parametric, theorem1_class, ParamSystem, PolyQ};

fn reduction(c: &mut Criterion) {
    let coeffs: Vec<_> = (0..MONOMIAL_COUNT as i64)
        .map(|i| q(i * 7 - 40, i % 5 + 1))
        .collect();
    let e = FormalExpr::from_rationals(&coeffs);
    c.bench_function("reduce 21 -> 14", |b| {
        b.iter(|| reduce_to_basis(black_box(&e)))
    });
    let dr = expand(&theorem1_class());
    c.bench_function("reduce symbolic DR class", |b| {
        b.iter(|| reduce_to_basis(black_box(&dr)))
    });
    c.bench_function("restrict to compact type", |b| {
        b.iter(|| ct::restrict_formal(black_box(&dr)))
    });
}

fn solve(c: &mut Criterion) {
    let sys = ParamSystem::builtin();
    c.bench_function("solve 16x14 parametric system", |b| {
        b.iter(|| solve_parametric(black_box(&sys)).unwrap())
    });
}

fn interpolation(c: &mut Criterion) {
    let p = PolyQ::from_coeffs((0..9).map(|i| q(3 * i - 11, i + 2)).collect());
    let pts: Vec<_> = (0..9).map(|x| (q(x, 1), p.eval(&q(x, 1)))).collect();
    c.bench_function("interpolate degree 8", |b| {
        b.iter(|| PolyQ::interpolate(black_box(&pts)).unwrap())
    });
}

criterion_group!(benches, reduction, solve, interpolation);
criterion_main!(benches);
