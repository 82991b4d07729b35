use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Ball;
use crate::operators::{
    difference_of_products, eval_product_commutator, eval_sum_commutator, KernelSpec, ProductMode,
    QuadratureConfig, SumMode, SymbolForm, SymbolSpec, TestFunction,
};
use crate::params::ExponentVector;
use crate::weights::{a_p_quantity, a_pq_quantity, apq_to_ap_transform, WeightSpec};

use super::{ExperimentReport, Verdict};

pub const PRODUCT_IDENTITY_TOL: f64 = 1e-12;
pub const MODE_AGREEMENT_TOL: f64 = 1e-6;
pub const TRANSFORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSizes {
    pub tuples: usize,
    pub max_m: usize,
    pub commutator_instances: usize,
    pub transform_balls: usize,
    pub transform_instances: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes { tuples: 10_000, max_m: 5, commutator_instances: 100, transform_balls: 50, transform_instances: 10 }
    }
}

/// Random smooth bilinear instance on the line: bump inputs, mixed symbols.
pub(crate) struct CommutatorInstance {
    pub kernel: KernelSpec,
    pub symbols: Vec<SymbolSpec>,
    pub inputs: Vec<TestFunction>,
    pub x: f64,
}

fn random_symbol(rng: &mut ChaCha8Rng) -> SymbolSpec {
    match rng.gen_range(0..3) {
        0 => SymbolSpec {
            form: SymbolForm::Power { center: vec![rng.gen_range(-0.5..0.5)], coef: rng.gen_range(0.5..2.0) },
            delta: rng.gen_range(0.2..0.9),
            constant: 2.0,
        },
        1 => SymbolSpec {
            form: SymbolForm::Polynomial { coefs: (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect() },
            delta: 1.0,
            constant: 5.0,
        },
        _ => SymbolSpec {
            form: SymbolForm::Bump { center: vec![rng.gen_range(-0.5..0.5)], radius: rng.gen_range(0.8..2.0), height: rng.gen_range(0.5..3.0) },
            delta: 1.0,
            constant: 10.0,
        },
    }
}

pub(crate) fn random_instance(rng: &mut ChaCha8Rng) -> CommutatorInstance {
    let inputs = (0..2)
        .map(|_| {
            TestFunction::bump(vec![rng.gen_range(-0.5..0.5)], rng.gen_range(0.3..1.0), rng.gen_range(0.5..2.0))
                .expect("positive radius")
        })
        .collect();
    CommutatorInstance {
        kernel: KernelSpec::standard(rng.gen_range(0.3..1.7)),
        symbols: (0..2).map(|_| random_symbol(rng)).collect(),
        inputs,
        x: rng.gen_range(-1.0..1.0),
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Largest pairwise relative discrepancies `(product modes, sum modes)` on
/// `count` random instances.
pub(crate) fn mode_agreement(seed: u64, count: usize, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_product: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for _ in 0..count {
        let inst = random_instance(&mut rng);
        let x = [inst.x];
        let prod = |mode| eval_product_commutator(&inst.symbols, &inst.kernel, &inst.inputs, &x, cfg, mode);
        let d = prod(ProductMode::Direct)?;
        let e = prod(ProductMode::Expansion)?;
        let i = prod(ProductMode::Iterative)?;
        worst_product = worst_product.max(rel_gap(d, e)).max(rel_gap(d, i)).max(rel_gap(e, i));
        let sum = |mode| eval_sum_commutator(&inst.symbols, &inst.kernel, &inst.inputs, &x, cfg, mode);
        worst_sum = worst_sum.max(rel_gap(sum(SumMode::Direct)?, sum(SumMode::Iterative)?));
    }
    Ok((worst_product, worst_sum))
}

/// Largest relative error of the difference-of-products identity.
pub(crate) fn product_identity(seed: u64, tuples: usize, max_m: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..tuples {
        let m = rng.gen_range(1..=max_m.max(1));
        let mut draw = || (0..m).map(|_| rng.gen_range(-10.0..10.0)).collect::<Vec<f64>>();
        let (a, b, c) = (draw(), draw(), draw());
        worst = worst.max(difference_of_products(&a, &b, &c).rel_error());
    }
    worst
}

/// Largest relative gap between `a_p(z, ell, B)` and `a_pq(w, p, q, B)^{q/ell}`
/// plus the number of compared finite pairs.
pub(crate) fn transform_identity(seed: u64, instances: usize, balls: usize) -> Result<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family: Vec<Ball> = (0..balls)
        .map(|_| Ball::interval(rng.gen_range(-3.0..3.0), 10f64.powf(rng.gen_range(-2.0..1.0))))
        .collect();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    let mut made = 0;
    while made < instances {
        let p: Vec<f64> = (0..2).map(|_| if rng.gen_bool(0.2) { 1.0 } else { rng.gen_range(1.2..6.0) }).collect();
        let p = ExponentVector::new(p)?;
        let q = 1.0 / (rng.gen_range(0.05..0.95) * p.inv_aggregate());
        let w: Vec<WeightSpec> = (0..2)
            .map(|i| {
                let xi = if p.is_one(i) {
                    rng.gen_range(-0.4..0.0)
                } else {
                    let s = 0.5 / p.conjugate(i);
                    rng.gen_range(-s..s)
                };
                WeightSpec::power(xi)
            })
            .collect();
        let Ok(t) = apq_to_ap_transform(&w, &p, q) else { continue };
        if !a_pq_quantity(&w, &p, q, &family[0])?.is_finite() {
            continue;
        }
        made += 1;
        for ball in &family {
            let lhs = a_p_quantity(&t.z, &t.ell, ball)?;
            let rhs = a_pq_quantity(&w, &p, q, ball)?.powf(q / t.ell_aggregate);
            if lhs.is_infinite() && rhs.is_infinite() {
                continue;
            }
            compared += 1;
            worst = worst.max(rel_gap(lhs, rhs));
        }
    }
    Ok((worst, compared))
}

/// Run the three exact-identity suites and aggregate their verdicts.
pub fn verify_identity_suites(seed: u64, sizes: &SuiteSizes) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut report = ExperimentReport::new("identity_suites");
    report.seed = Some(seed);
    report.param("tuples", sizes.tuples as f64).param("max_m", sizes.max_m as f64);
    report.param("commutator_instances", sizes.commutator_instances as f64);
    report.param("transform_balls", sizes.transform_balls as f64).param("transform_instances", sizes.transform_instances as f64);

    let dop = product_identity(seed, sizes.tuples, sizes.max_m);
    let (prod_gap, sum_gap) = mode_agreement(seed.wrapping_add(1), sizes.commutator_instances, &QuadratureConfig::default())?;
    let (tr_gap, compared) = transform_identity(seed.wrapping_add(2), sizes.transform_instances, sizes.transform_balls)?;

    report.stat("product_identity_max_rel", dop);
    report.stat("product_modes_max_rel", prod_gap).stat("sum_modes_max_rel", sum_gap);
    report.stat("transform_max_rel", tr_gap).stat("transform_pairs", compared as f64);
    report.threshold("product_identity_max_rel", PRODUCT_IDENTITY_TOL);
    report.threshold("modes_max_rel", MODE_AGREEMENT_TOL).threshold("transform_max_rel", TRANSFORM_TOL);
    let ok = dop <= PRODUCT_IDENTITY_TOL && prod_gap <= MODE_AGREEMENT_TOL && sum_gap <= MODE_AGREEMENT_TOL && tr_gap <= TRANSFORM_TOL;
    report.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}
