use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cohocalc_core::grr::{lambda_grr, KClass};
use cohocalc_core::{dsl, repro, spaces};

const WBAR: &str = include_str!("../../cli/programs/wbar.coh");

fn ring_kernel(c: &mut Criterion) {
    let w = spaces::wbar().unwrap();
    let [zeta, gamma, theta, rho] = ["zeta", "gamma", "theta", "rho"].map(|n| w.class(n).unwrap());
    let x = &(&(&theta.scale_int(-4) + &gamma.scale_int(2)) - &rho.scale_int(5)) - &zeta;
    c.bench_function("wbar quintic", |b| b.iter(|| black_box(&x).pow(5).integrate().unwrap()));
    c.bench_function("wbar normalize", |b| b.iter(|| black_box(&x).normalize()));
    c.bench_function("build wbar", |b| b.iter(|| spaces::wbar().unwrap()));
}

fn grr_grid(c: &mut Criterion) {
    c.bench_function("GRR grid g=2 k=1", |b| {
        b.iter(|| {
            for r in -4..=4 {
                for d in -4..=4 {
                    black_box(lambda_grr(2, 1, &KClass::new(r, d)).unwrap());
                }
            }
        })
    });
}

fn end_to_end(c: &mut Criterion) {
    c.bench_function("parse and evaluate the wbar file", |b| b.iter(|| dsl::run(black_box(WBAR)).unwrap()));
    let mut g = c.benchmark_group("scenarios");
    g.sample_size(10);
    g.bench_function("repro all, threaded", |b| b.iter(|| repro::all().unwrap()));
    g.bench_function("repro all, sequential", |b| b.iter(|| repro::all_sequential().unwrap()));
    g.finish();
}

criterion_group!(benches, ring_kernel, grr_grid, end_to_end);
criterion_main!(benches);
