use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hsharp::quadrature::{a_q_oracle, sphere_mean};
use hsharp::sharp::{a_q, c_p_global, c_p_x, ExponentPair};
use hsharp::specialfn::{gamma_fn, hyp2f1, Hyp2F1Params};
use hsharp::QuadratureConfig;
use hsharp_bench::bench_radii;

fn special_functions(c: &mut Criterion) {
    c.bench_function("gamma_fn", |b| b.iter(|| gamma_fn(black_box(37.25))));
    c.bench_function("hyp2f1 series z=0.5", |b| {
        b.iter(|| hyp2f1(black_box(Hyp2F1Params::new(0.3, 0.7, 2.1, 0.5))))
    });
    c.bench_function("hyp2f1 near one", |b| {
        b.iter(|| hyp2f1(black_box(Hyp2F1Params::new(-0.4, -1.4, 2.0, 0.999))))
    });
}

fn sharp_constants(c: &mut Criterion) {
    let exps = ExponentPair::from_p(1.6).unwrap();
    let radii = bench_radii();
    c.bench_function("c_p_x over radii n=4", |b| {
        b.iter(|| {
            for &r in &radii {
                black_box(c_p_x(4, &exps, r).unwrap());
            }
        })
    });
    c.bench_function("a_q at r=1", |b| b.iter(|| a_q(black_box(5), 2.5, 1.0)));
    c.bench_function("c_p_global", |b| b.iter(|| c_p_global(black_box(6), &exps)));
}

fn oracles(c: &mut Criterion) {
    let cfg = QuadratureConfig::default();
    c.bench_function("a_q_oracle r=0.99", |b| {
        b.iter(|| a_q_oracle(black_box(4), 1.3, 0.99, &cfg))
    });
    let mc = QuadratureConfig {
        mc_samples: 100_000,
        ..cfg
    };
    c.bench_function("sphere_mean 1e5 n=3", |b| {
        b.iter(|| sphere_mean(3, |z| z[0] * z[0], black_box(&mc)))
    });
}

criterion_group!(benches, special_functions, sharp_constants, oracles);
criterion_main!(benches);
