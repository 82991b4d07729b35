//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every tolerance below is pinned here rather than taken from
//! library defaults, so a change of default cannot loosen the check.
//!
//! Set `MULTIFRAC_BLESS=1` to rewrite the region golden files.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::Rational64;

use multifrac::experiments::{
    run_boundedness_experiment, run_triviality_probe, verify_identity_suites, verify_power_integral_asymptotic,
    AsymptoticConfig, BoundednessInputs, ExperimentConfig, ExperimentReport, InputScaling, ProbeDirection,
    SuiteSizes,
};
use multifrac::geometry::BallFamily;
use multifrac::numeric::logspace;
use multifrac::operators::{eval_i_alpha, KernelSpec, QuadratureConfig, SymbolSpec, TestFunction};
use multifrac::params::{
    classify_region, delta_tilde_nodes, region_grid, CommutatorVariant, ExponentVector, Panel, ParameterPoint,
    RegionClass,
};
use multifrac::weights::{construct_weights, empirical_class_sup, hm_full_quantity, WeightSpec, WeightVector};

const SEED: u64 = 20240601;

// criteria 1-3
const DOP_TOL: f64 = 1e-12;
const MODES_TOL: f64 = 1e-6;
const MODES_BUDGET_S: f64 = 300.0;
const TRANSFORM_TOL: f64 = 1e-10;
// criterion 4
const CLOSED_FORM_TOL: f64 = 1e-4;
const MIN_ORDER: f64 = 1.0;
// criterion 5
const ASYMPTOTIC_SPREAD: f64 = 10.0;
const CENTRED_FOUR_TOL: f64 = 1e-9;
// criterion 6
const PER_DECADE_FACTOR: f64 = 2.0;
// criterion 7
const PROBE_REL_TOL: f64 = 0.05;
// criterion 8
const SLOPE_TOL: f64 = 0.05;
const SPREAD_MAX: f64 = 10.0;
// criterion 9
const GRID_RESOLUTION: usize = 41;
const GRID_NODE_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn identity_suites() -> ExperimentReport {
    verify_identity_suites(SEED, &SuiteSizes::default()).expect("identity suites run")
}

fn criterion_1(r: &ExperimentReport) -> Outcome {
    let e = r.summary["product_identity_max_rel"];
    outcome(e <= DOP_TOL, format!("10^4 tuples, m <= 5, max rel {e:.3e} (tol {DOP_TOL:.0e})"))
}

fn criterion_2(r: &ExperimentReport) -> Outcome {
    let prod = r.summary["product_modes_max_rel"];
    let sum = r.summary["sum_modes_max_rel"];
    let secs = r.runtime_ms / 1e3;
    outcome(
        prod <= MODES_TOL && sum <= MODES_TOL && secs < MODES_BUDGET_S,
        format!("100 instances, product {prod:.3e}, sum {sum:.3e} (tol {MODES_TOL:.0e}), suite runtime {secs:.1} s"),
    )
}

fn criterion_3(r: &ExperimentReport) -> Outcome {
    let e = r.summary["transform_max_rel"];
    let pairs = r.summary["transform_pairs"];
    outcome(e <= TRANSFORM_TOL && pairs > 0.0, format!("{pairs} finite ball pairs, max rel {e:.3e} (tol {TRANSFORM_TOL:.0e})"))
}

fn criterion_4() -> Outcome {
    let unit = TestFunction::boxed(vec![[0.0, 1.0]], 1.0).unwrap();
    let cases = [(vec![unit.clone()], 0.5, 2.0), (vec![unit.clone(), unit], 1.0, 2.0 * 2f64.ln())];
    let midpoint = |cells| QuadratureConfig { base_cells: cells, outer_cells: 0, order: Some(1), ..QuadratureConfig::default() };
    let mut pass = true;
    let mut parts = Vec::new();
    for (f, alpha, exact) in &cases {
        let got = eval_i_alpha(f, *alpha, &[0.0], &QuadratureConfig::default()).unwrap();
        let err = rel(got, *exact);
        let vals: Vec<f64> = [1, 2, 4, 8].iter().map(|&c| eval_i_alpha(f, *alpha, &[0.0], &midpoint(c)).unwrap()).collect();
        let changes: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        let order = changes.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);
        pass &= err <= CLOSED_FORM_TOL && order >= MIN_ORDER;
        parts.push(format!("m = {}: rel err {err:.2e}, observed order {order:.2}", f.len()));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [-0.5, 0.0, 1.0] {
        let r = verify_power_integral_asymptotic(alpha, &AsymptoticConfig::default()).unwrap();
        let (c1, c2) = (r.summary["c1"], r.summary["c2"]);
        pass &= c1 > 0.0 && c2 / c1 < ASYMPTOTIC_SPREAD;
        parts.push(format!("alpha {alpha}: [{c1:.4}, {c2:.4}]"));
        if alpha == -0.5 {
            let worst = r
                .profile
                .iter()
                .filter(|row| row.center[0] == 0.0)
                .map(|row| (row.numerator - 4.0).abs())
                .fold(0.0, f64::max);
            pass &= worst <= CENTRED_FOUR_TOL;
            parts.push(format!("centred raw ratio off 4 by {worst:.1e}"));
        }
    }
    outcome(pass, parts.join("; "))
}

/// Largest `|log10(v2 / v1)| / (log10 R2 - log10 R1)` over consecutive radii.
fn per_decade_log_change(profile: &[(f64, f64)]) -> f64 {
    profile
        .windows(2)
        .map(|w| (w[1].1 / w[0].1).log10().abs() / (w[1].0 / w[0].0).log10())
        .fold(0.0, f64::max)
}

fn criterion_6() -> Outcome {
    let points: [(char, f64, f64, Vec<f64>); 6] = [
        ('a', 0.9, -0.8, vec![2.0, 2.0]),
        ('b', 1.0, -0.6, vec![1.0, 2.0]),
        ('c', 1.5, -0.1, vec![4.0, 4.0]),
        ('d', 0.9, -0.4, vec![2.0, 2.0]),
        ('e', 0.9, -0.2, vec![2.0, 2.0]),
        ('f', 1.0, -1.0, vec![1.0, 1.0]),
    ];
    let family = BallFamily::standard(1);
    let mut pass = true;
    let mut parts = Vec::new();
    for (letter, beta, dt, p) in points {
        let point = ParameterPoint::new(1, 2, beta, 0.3, dt, 1.0).unwrap();
        let p = ExponentVector::new(p).unwrap();
        let case_ok = classify_region(&point, &p).case().map(|c| c.letter()) == Some(letter);
        let (pair, _) = construct_weights(&point, &p).unwrap();
        let sweep = empirical_class_sup(&family, |b| hm_full_quantity(&pair, &p, &point, b)).unwrap();
        let change = per_decade_log_change(&sweep.radius_profile());
        let factor = 10f64.powf(change);
        pass &= case_ok && sweep.sup.is_finite() && factor < PER_DECADE_FACTOR;
        parts.push(format!("({letter}) sup {:.3e} x{factor:.3}/decade", sweep.sup));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let p = ExponentVector::uniform(2, 1.0).unwrap();
    let pair = WeightVector::new(WeightSpec::constant(1.0), vec![WeightSpec::constant(1.0); 2]).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    // beta - n/p = delta, so the forced exponent is delta - dt
    for gap in [0.1, 0.2] {
        let point = ParameterPoint::new(1, 2, 1.3, 0.3, 0.3 + gap, 1.0).unwrap();
        let r = run_triviality_probe(&pair, &p, &point, ProbeDirection::RToZero).unwrap();
        let slope = r.summary["fitted_slope"];
        let forced = -gap;
        pass &= rel(slope, forced) <= PROBE_REL_TOL;
        parts.push(format!("gap {gap}: slope {slope:.6} vs {forced}"));
    }
    outcome(pass, parts.join("; "))
}

fn bounded_instance(variant: CommutatorVariant, scaling: InputScaling) -> BoundednessInputs {
    // both instances balance dilations: w + beta - dt = sum v_i + n/p
    let (beta, lead) = match variant {
        CommutatorVariant::Sum => (1.1, 0.4),
        CommutatorVariant::Product => (1.4, 0.1),
    };
    BoundednessInputs {
        variant,
        kernel: KernelSpec::standard(0.8),
        symbols: vec![SymbolSpec::power(1, 0.3); 2],
        inputs: vec![TestFunction::bump(vec![0.0], 1.0, 1.0).unwrap(), TestFunction::bump(vec![0.2], 0.8, 1.0).unwrap()],
        pair: WeightVector::new(WeightSpec::power(lead), vec![WeightSpec::power(0.2); 2]).unwrap(),
        p: ExponentVector::uniform(2, 1.0).unwrap(),
        point: ParameterPoint::new(1, 2, beta, 0.3, 0.1, 1.0).unwrap(),
        scaling,
    }
}

fn criterion_8() -> Outcome {
    let cfg = ExperimentConfig { slope_tol: SLOPE_TOL, spread_max: SPREAD_MAX, ..ExperimentConfig::default() };
    let family = BallFamily::from_radii(1, &logspace(0.25, 8.0, 6), &[0.0, 0.5, 2.0]).unwrap();
    let small = BallFamily::from_radii(1, &[0.25, 8.0], &[0.0, 2.0]).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for variant in [CommutatorVariant::Sum, CommutatorVariant::Product] {
        let r = run_boundedness_experiment(&bounded_instance(variant, InputScaling::Dilated), &family, &cfg).unwrap();
        let slope = r.summary.get("loglog_slope").copied().unwrap_or(f64::NAN);
        let spread = r.summary["max_over_min"];
        pass &= slope.abs() <= SLOPE_TOL && spread < SPREAD_MAX;
        parts.push(format!("{}: slope {slope:.2e}, max/min {spread:.6}", r.id));

        let mut constant = bounded_instance(variant, InputScaling::Fixed);
        constant.symbols = vec![SymbolSpec::constant(1.7); 2];
        let z = run_boundedness_experiment(&constant, &small, &cfg).unwrap();
        let zero = z.profile.iter().all(|row| row.value == 0.0);
        pass &= zero;
        parts.push(format!("constant symbols zero: {zero}"));
    }
    outcome(pass, parts.join("; "))
}

/// Same inputs for every ball: reported, not judged. The ratio carries the
/// residual power of `R` left by the fixed inputs.
fn fixed_input_info() -> String {
    let cfg = ExperimentConfig { slope_tol: SLOPE_TOL, spread_max: SPREAD_MAX, ..ExperimentConfig::default() };
    let family = BallFamily::from_radii(1, &logspace(0.25, 8.0, 6), &[0.0, 0.5, 2.0]).unwrap();
    let r = run_boundedness_experiment(&bounded_instance(CommutatorVariant::Sum, InputScaling::Fixed), &family, &cfg).unwrap();
    format!(
        "sup {:.4e}, slope {:.4}, max/min {:.4}",
        r.summary["sup_ratio"],
        r.summary.get("loglog_slope").copied().unwrap_or(f64::NAN),
        r.summary["max_over_min"]
    )
}

fn rat(x: f64) -> Rational64 {
    Rational64::approximate_float(x).expect("representable")
}

/// Exact re-derivation of the region tag from the inequalities.
fn exact_tag(point: &ParameterPoint, inv_p: Rational64, dt: Rational64) -> String {
    let n = Rational64::from_integer(point.n as i64);
    let m = Rational64::from_integer(point.m as i64);
    let beta = rat(point.beta);
    let delta = rat(point.delta);
    let upper = beta - n * inv_p;
    let lower = beta - m * n;
    let tau = lower * (Rational64::from_integer(1) - m.recip()) + delta / m;
    let tag = if dt > delta || dt > upper {
        "TrivialWeights_a"
    } else if dt < lower {
        "TrivialOrZero_c"
    } else if dt == delta && dt == upper {
        "TrivialWeights_b"
    } else if dt == lower {
        "Nontrivial_f"
    } else if dt < tau {
        if tau <= upper { "Nontrivial_a" } else { "Nontrivial_b" }
    } else if dt == tau {
        if tau < delta && delta < upper {
            "Nontrivial_c"
        } else if tau < upper && upper < delta {
            "Nontrivial_d"
        } else {
            "ExcludedBoundary"
        }
    } else {
        "Nontrivial_e"
    };
    tag.to_string()
}

fn golden_path(panel: Panel) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("region_{}.csv", panel.name()))
}

fn criterion_9() -> Outcome {
    let bless = std::env::var("MULTIFRAC_BLESS").is_ok_and(|v| v == "1");
    let res = GRID_RESOLUTION as i64;
    let mut pass = true;
    let mut parts = Vec::new();
    for panel in Panel::ALL {
        let grid = region_grid(panel, GRID_RESOLUTION).unwrap();
        let point = grid.point;
        let m = point.m as i64;
        let lower = rat(point.beta) - Rational64::from_integer(m * point.n as i64);
        let h = (rat(point.delta) - lower) / (res - 3);
        let float_nodes = delta_tilde_nodes(point.lower_edge(), point.delta, GRID_RESOLUTION);
        let mut mismatches = 0;
        let mut excluded = 0;
        for (k, column) in grid.cells.chunks(GRID_RESOLUTION).enumerate() {
            let inv_p = Rational64::new(k as i64 * m, res - 1);
            for (j, cell) in column.iter().enumerate() {
                let dt = lower + h * (j as i64 - 1);
                let exact_dt = *dt.numer() as f64 / *dt.denom() as f64;
                let exact_inv = *inv_p.numer() as f64 / *inv_p.denom() as f64;
                let nodes_match = (cell.delta_tilde - exact_dt).abs() <= GRID_NODE_TOL
                    && (cell.inv_p - exact_inv).abs() <= GRID_NODE_TOL
                    && cell.delta_tilde == float_nodes[j];
                let tag = exact_tag(&point, inv_p, dt);
                if !nodes_match || tag != cell.class.tag() {
                    mismatches += 1;
                }
                if cell.class == RegionClass::ExcludedBoundary {
                    excluded += 1;
                }
            }
        }
        let csv = grid.to_csv();
        let stable = csv == region_grid(panel, GRID_RESOLUTION).unwrap().to_csv();
        let path = golden_path(panel);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &csv).unwrap();
        }
        let golden = std::fs::read_to_string(&path).map(|g| g == csv).unwrap_or(false);
        pass &= mismatches == 0 && stable && golden;
        parts.push(format!("{}: {mismatches} mismatches, {excluded} excluded, golden {golden}", panel.name()));
    }
    outcome(pass, parts.join("; "))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let suites = identity_suites();
    let results: Vec<(&str, Outcome)> = vec![
        ("difference-of-products identity", criterion_1(&suites)),
        ("commutator representations agree", criterion_2(&suites)),
        ("per-ball transform identity", criterion_3(&suites)),
        ("quadrature closed forms and order", criterion_4()),
        ("power integral asymptotics", criterion_5()),
        ("weight constructions", criterion_6()),
        ("triviality probes", criterion_7()),
        ("boundedness experiments", criterion_8()),
        ("region classifier", criterion_9()),
    ];
    let mut failed = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        println!("criterion {} {name}: {} ({})", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("info: boundedness with fixed inputs (not judged): {}", fixed_input_info());
    println!("acceptance: {} of {} criteria passed in {:.1} s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
