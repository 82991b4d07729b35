use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use multifrac::params::{region_grid, Panel};
use multifrac::weights::{a_pq_quantity, empirical_class_sup, hm_full_quantity};
use multifrac::BallFamily;
use multifrac_bench::case_e;

fn class_sweeps(c: &mut Criterion) {
    let family = BallFamily::standard(1);
    let (pair, p, point) = case_e();
    c.bench_function("hm_full over the standard family", |b| {
        b.iter(|| empirical_class_sup(black_box(&family), |ball| hm_full_quantity(&pair, &p, &point, ball)).unwrap())
    });
    c.bench_function("a_p_inf over the standard family", |b| {
        b.iter(|| empirical_class_sup(black_box(&family), |ball| a_pq_quantity(&pair.v, &p, f64::INFINITY, ball)).unwrap())
    });
}

fn region(c: &mut Criterion) {
    c.bench_function("region grid 64x64", |b| b.iter(|| region_grid(black_box(Panel::BetaGt), 64).unwrap()));
}

criterion_group!(benches, class_sweeps, region);
criterion_main!(benches);
