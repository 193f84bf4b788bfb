use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use iplp::dense::DenseVector;
use iplp::inner::{ne_sor_apply, InnerIterConfig, RowWorkspace};
use iplp::krylov::{self, KrylovConfig, KrylovMethod};
use iplp::randlp::{generate_problem, GenSpec};
use iplp::sparse::kernels;

fn bench_matvec(c: &mut Criterion) {
    let spec = GenSpec {
        m: 400,
        n: 1200,
        rank: 380,
        cond: 1e4,
        density: 0.25,
        seed: 9,
    };
    let p = generate_problem(&spec).unwrap();
    let a = &p.a;
    let x = DenseVector::constant(a.ncols(), 1.0);
    let yv = DenseVector::constant(a.nrows(), 1.0);

    let mut group = c.benchmark_group("matvec");
    group.bench_function("forward_seq", |b| {
        let mut y = DenseVector::zeros(a.nrows());
        b.iter(|| {
            kernels::matvec_seq(a, black_box(&x), &mut y);
            black_box(&y);
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("forward_par", |b| {
        let mut y = DenseVector::zeros(a.nrows());
        b.iter(|| {
            kernels::matvec_par(a, black_box(&x), &mut y);
            black_box(&y);
        })
    });
    group.bench_function("transpose_seq", |b| {
        let mut x2 = DenseVector::zeros(a.ncols());
        b.iter(|| {
            kernels::matvec_transpose_seq(a, black_box(&yv), &mut x2);
            black_box(&x2);
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("transpose_par", |b| {
        let mut x2 = DenseVector::zeros(a.ncols());
        b.iter(|| {
            kernels::matvec_transpose_par(a, black_box(&yv), &mut x2);
            black_box(&x2);
        })
    });
    group.finish();
}

fn bench_sweeps_and_solves(c: &mut Criterion) {
    let spec = GenSpec {
        m: 150,
        n: 450,
        rank: 120,
        cond: 1e2,
        density: 0.5,
        seed: 4,
    };
    let p = generate_problem(&spec).unwrap();
    let a = &p.a;
    let ws = RowWorkspace::for_operator(a);
    let g = DenseVector::constant(a.nrows(), 1.0);
    let inner = InnerIterConfig::default();

    let mut group = c.benchmark_group("solvers");
    group.bench_function("ne_sor_apply", |b| {
        b.iter(|| black_box(ne_sor_apply(a, black_box(&g), &inner, &ws)))
    });
    for method in [KrylovMethod::Cgne, KrylovMethod::Mrne, KrylovMethod::AbGmres] {
        let cfg = KrylovConfig {
            method,
            tol: 1e-10,
            max_iter: 0,
            inner,
        };
        group.bench_function(method.name(), |b| {
            b.iter(|| black_box(krylov::solve(a, black_box(&p.b), &cfg, &ws).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_matvec, bench_sweeps_and_solves);
criterion_main!(benches);
