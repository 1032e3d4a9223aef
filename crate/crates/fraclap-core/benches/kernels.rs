//! Kernel and operator benchmarks.
//!
//! The sweep groups time the same grid twice: once on a plain sequential
//! iterator and once through [`par::try_map`].  Built with the default
//! `parallel` feature the second row uses rayon's pool; built with
//! `--no-default-features` it runs the sequential fallback, so the two rows
//! also expose the abstraction's overhead.

use criterion::{criterion_group, criterion_main, Criterion};
use fraclap_core::hypergeom::{pfq, PfqSpec};
use fraclap_core::laplace::{verify_theorem, LaplaceQuery, Side};
use fraclap_core::mellin::{fox_wright, h_function, ContourConfig, HFunctionSpec};
use fraclap_core::operators::{eval_i, kernel_ki, ki_h_spec, kj_wright_spec};
use fraclap_core::params::{OperatorParams, TestFunction};
use fraclap_core::{par, Complex64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Order-zero reference parameters used throughout the test suites.
fn std_params() -> OperatorParams {
    OperatorParams::new(
        c(0.8, 0.0),
        c(0.1, 0.0),
        c(0.3, 0.0),
        0.2,
        1.0,
        c(0.5, 0.0),
        vec![],
        vec![],
    )
    .unwrap()
}

fn geometric_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn bench_special(cr: &mut Criterion) {
    let spec = PfqSpec::new(
        vec![c(0.3, 0.0), c(0.4, 0.0)],
        vec![c(1.5, 0.0)],
    );
    cr.bench_function("pfq gauss z=0.5", |b| {
        b.iter(|| pfq(&spec, std::hint::black_box(c(0.5, 0.0))).unwrap())
    });

    let cfg = ContourConfig::default();
    let exp_spec = HFunctionSpec::new(1, 0, vec![], vec![(c(0.0, 0.0), 1.0)]).unwrap();
    cr.bench_function("h_function exp spec z=1.5", |b| {
        b.iter(|| h_function(&exp_spec, std::hint::black_box(c(1.5, 0.0)), &cfg).unwrap())
    });

    let p = std_params();
    let ki_spec = ki_h_spec(&p, c(0.4, 0.0), 0).unwrap();
    cr.bench_function("h_function K_I spec z=2", |b| {
        b.iter(|| h_function(&ki_spec, std::hint::black_box(c(2.0, 0.0)), &cfg).unwrap())
    });

    let kj_spec = kj_wright_spec(&p, c(0.4, 0.0), 0).unwrap();
    cr.bench_function("fox_wright K_J series z=-5", |b| {
        b.iter(|| fox_wright(&kj_spec, std::hint::black_box(c(-5.0, 0.0))).unwrap())
    });
}

fn bench_kernel_sweep(cr: &mut Criterion) {
    let p = std_params();
    let cfg = ContourConfig::default();
    let xs = geometric_grid(64, 0.1, 20.0);
    let lambda = c(0.4, 0.0);
    let s = c(2.0, 0.0);
    let mut g = cr.benchmark_group("kernel_ki sweep 64pts");
    g.sample_size(10);
    g.bench_function("sequential", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| kernel_ki(&p, lambda, s, x, &cfg).unwrap().value())
                .collect::<Vec<_>>()
        })
    });
    g.bench_function("data_parallel", |b| {
        b.iter(|| {
            par::try_map(&xs, |&x| kernel_ki(&p, lambda, s, x, &cfg).map(|sv| sv.value()))
                .unwrap()
        })
    });
    g.finish();
}

fn bench_operator_sweep(cr: &mut Criterion) {
    let p = std_params();
    let phi = TestFunction::new(c(1.0, 0.0), c(0.5, 0.0), 1.0).unwrap();
    let xs = geometric_grid(16, 0.25, 4.0);
    let mut g = cr.benchmark_group("eval_i sweep 16pts");
    g.sample_size(10);
    g.bench_function("sequential", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| eval_i(&p, &phi, x, 1e-8).unwrap())
                .collect::<Vec<_>>()
        })
    });
    g.bench_function("data_parallel", |b| {
        b.iter(|| par::try_map(&xs, |&x| eval_i(&p, &phi, x, 1e-8)).unwrap())
    });
    g.finish();
}

fn bench_verify(cr: &mut Criterion) {
    let query = LaplaceQuery {
        params: std_params(),
        lambda: c(0.4, 0.0),
        s: c(2.0, 0.0),
        phi: TestFunction::new(c(1.0, 0.0), c(0.5, 0.0), 1.0).unwrap(),
        side: Side::Lower,
    };
    let mut g = cr.benchmark_group("verify_theorem");
    g.sample_size(10);
    g.bench_function("lower reference query", |b| {
        b.iter(|| verify_theorem(&query).unwrap())
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_special,
    bench_kernel_sweep,
    bench_operator_sweep,
    bench_verify
);
criterion_main!(benches);
