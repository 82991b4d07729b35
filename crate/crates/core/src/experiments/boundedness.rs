use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Result};
use crate::geometry::{Ball, BallFamily};
use crate::lipschitz::{ball_average, oscillation};
use crate::numeric::{graded, linspace, Grading};
use crate::operators::{
    eval_i_alpha, eval_product_commutator, eval_sum_commutator, KernelSpec, ProductMode, SumMode, SymbolSpec,
    TestFunction,
};
use crate::params::{admissible_theorem, CommutatorVariant, ExponentVector, ParameterPoint};
use crate::weights::{ball_sup_norm, empirical_class_sup, hm_full_quantity, rh_quantity, WeightSpec, WeightVector};

use super::{judge_flat, ExperimentConfig, ExperimentReport, ProfileRow, Verdict};

/// Everything a boundedness run needs besides the ball family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundednessInputs {
    pub variant: CommutatorVariant,
    pub kernel: KernelSpec,
    pub symbols: Vec<SymbolSpec>,
    pub inputs: Vec<TestFunction>,
    pub pair: WeightVector,
    pub p: ExponentVector,
    pub point: ParameterPoint,
    #[serde(default)]
    pub scaling: InputScaling,
}

/// How the inputs relate to the ball being measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputScaling {
    /// The same inputs for every ball.
    #[default]
    Fixed,
    /// Inputs `f_i(x / R)` for a ball of radius `R`. With power weights and
    /// homogeneous symbols in dilation balance the ratio is then exactly
    /// independent of `R`, so any trend is numerical.
    Dilated,
}

/// Tolerance on `beta = alpha_tilde`.
const BETA_MATCH_TOL: f64 = 1e-12;

/// `||f v||_p` by quadrature over the support box of `f`; `p = inf` takes
/// the sup over a uniform grid.
pub fn weighted_lp_norm(f: &TestFunction, v: &WeightSpec, p: f64) -> f64 {
    let g = |y: &[f64]| (f.eval(y) * v.eval(y)).abs();
    let n = f.dim();
    if p.is_infinite() {
        let per_axis = if n == 1 { 4001 } else { 201 };
        let axes: Vec<Vec<f64>> = f.support.iter().map(|[a, b]| linspace(*a, *b, per_axis)).collect();
        let mut best: f64 = 0.0;
        let mut y = vec![0.0; n];
        for code in 0..per_axis.pow(n as u32) {
            let mut rest = code;
            for (a, ya) in y.iter_mut().enumerate() {
                *ya = axes[a][rest % per_axis];
                rest /= per_axis;
            }
            best = best.max(g(&y));
        }
        return best;
    }
    let integral = if n == 1 {
        let [a, b] = f.support[0];
        let grading = Grading { levels: 40, order: 10 };
        let mut h = |t: f64| g(&[t]).powf(p);
        if a < 0.0 && b > 0.0 {
            graded(&mut h, a, 0.0, (false, true), grading) + graded(&mut h, 0.0, b, (true, false), grading)
        } else {
            graded(&mut h, a, b, (a == 0.0, b == 0.0), grading)
        }
    } else {
        tensor_box(&|y| g(y).powf(p), &f.support, 8, 10)
    };
    integral.powf(1.0 / p)
}

fn tensor_box(g: &dyn Fn(&[f64]) -> f64, support: &[[f64; 2]], panels: usize, order: usize) -> f64 {
    let n = support.len();
    let mut total = 0.0;
    let mut y = vec![0.0; n];
    let per_axis = panels * order;
    let rule = crate::numeric::gauss_legendre(order);
    for code in 0..per_axis.pow(n as u32) {
        let mut rest = code;
        let mut w = 1.0;
        for (a, ya) in y.iter_mut().enumerate() {
            let k = rest % per_axis;
            rest /= per_axis;
            let h = (support[a][1] - support[a][0]) / panels as f64;
            let lo = support[a][0] + (k / order) as f64 * h;
            *ya = lo + 0.5 * h * (1.0 + rule.nodes[k % order]);
            w *= 0.5 * h * rule.weights[k % order];
        }
        total += w * g(&y);
    }
    total
}

fn input_norms(inputs: &[TestFunction], v: &[WeightSpec], p: &ExponentVector) -> f64 {
    inputs.iter().zip(v).enumerate().map(|(i, (f, vi))| weighted_lp_norm(f, vi, p.get(i))).product()
}

fn check_shapes(inputs: &[TestFunction], pair: &WeightVector, p: &ExponentVector, point: &ParameterPoint, family: &BallFamily) -> Result<()> {
    point.validate()?;
    let m = point.m;
    if inputs.len() != m || pair.m() != m || p.m() != m {
        return domain(format!("need {m} inputs, weights and exponents"));
    }
    if inputs.iter().any(|f| f.dim() != point.n) || family.dim() != point.n {
        return domain(format!("inputs and balls must live in dimension {}", point.n));
    }
    Ok(())
}

/// Per-ball ratio
/// `||w chi_B||_inf |B|^{-1 - dt/n} int_B |Tf - (Tf)_B| / prod ||f_i v_i||_{p_i}`
/// for the commutator `T` of the requested variant.
pub fn run_boundedness_experiment(
    inputs: &BoundednessInputs,
    family: &BallFamily,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let BoundednessInputs { variant, kernel, symbols, inputs: f, pair, p, point, scaling } = inputs;
    check_shapes(f, pair, p, point, family)?;
    if symbols.len() != point.m {
        return domain(format!("need {} symbols", point.m));
    }
    let adm = admissible_theorem(point, p, kernel.alpha, *variant)?;
    let mut violations = adm.violations.clone();
    if (point.beta - adm.alpha_tilde).abs() > BETA_MATCH_TOL {
        violations.push(format!("beta = {} must equal alpha_tilde = {}", point.beta, adm.alpha_tilde));
    }
    if !violations.is_empty() {
        return precondition(format!("inadmissible parameters: {}", violations.join("; ")));
    }
    let class = empirical_class_sup(family, |b| hm_full_quantity(pair, p, point, b))?;
    if !class.sup.is_finite() {
        return precondition(format!("weights fail the class check on the family (sup = {})", class.sup));
    }

    let n = point.n as f64;
    let rows: Vec<ProfileRow> = family
        .balls()
        .par_iter()
        .enumerate()
        .map(|(id, ball)| {
            let local: Vec<TestFunction> = match scaling {
                InputScaling::Fixed => f.clone(),
                InputScaling::Dilated => f.iter().map(|fi| fi.dilated(ball.radius)).collect(),
            };
            let x_eval = |x: &[f64]| -> f64 {
                let v = match variant {
                    CommutatorVariant::Sum => {
                        eval_sum_commutator(symbols, kernel, &local, x, &cfg.quadrature, SumMode::Direct)
                    }
                    CommutatorVariant::Product => {
                        eval_product_commutator(symbols, kernel, &local, x, &cfg.quadrature, ProductMode::Direct)
                    }
                };
                v.expect("shapes validated before sampling")
            };
            let den = input_norms(&local, &pair.v, p);
            let osc = oscillation(&x_eval, ball, &cfg.ball);
            let num = if osc == 0.0 {
                0.0
            } else {
                ball_sup_norm(&pair.w, ball) * ball.volume().powf(-1.0 - point.delta_tilde / n) * osc
            };
            ProfileRow { ball_id: id, radius: ball.radius, center: ball.center.clone(), numerator: num, denominator: den, value: num / den }
        })
        .collect();
    let den = rows.iter().map(|r| r.denominator).fold(f64::INFINITY, f64::min);

    let mut report = ExperimentReport::new(match variant {
        CommutatorVariant::Sum => "boundedness_sum",
        CommutatorVariant::Product => "boundedness_product",
    });
    report
        .param("n", n)
        .param("m", point.m as f64)
        .param("alpha", kernel.alpha)
        .param("alpha_tilde", adm.alpha_tilde)
        .param("beta", point.beta)
        .param("delta", point.delta)
        .param("delta_tilde", point.delta_tilde)
        .param("p", p.aggregate());
    report.labels.insert(
        "input_scaling".into(),
        match scaling {
            InputScaling::Fixed => "fixed",
            InputScaling::Dilated => "dilated",
        }
        .into(),
    );
    report.stat("class_sup_hm_full", class.sup).stat("input_norm_product", den);
    report.profile = rows;
    finish_ratio_run(&mut report, den, cfg);
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Shared verdict for ratio profiles: `0/0` is degenerate, an identically
/// zero profile passes, otherwise the flatness rule decides.
fn finish_ratio_run(report: &mut ExperimentReport, den: f64, cfg: &ExperimentConfig) {
    if den == 0.0 {
        report.verdict = Verdict::Degenerate;
        report.notes.push("every input norm product is zero: ratio 0/0".into());
        for row in &mut report.profile {
            row.value = f64::NAN;
        }
        return;
    }
    if report.profile.iter().all(|r| r.value == 0.0) {
        report.stat("sup_ratio", 0.0);
        report.notes.push("commutator output vanishes: every ratio is 0".into());
        report.verdict = Verdict::Pass;
        return;
    }
    report.verdict = if judge_flat(report, cfg) { Verdict::Pass } else { Verdict::Fail };
}

/// `f chi_{2B}`: the support box clipped to the cube circumscribing `2B`
/// (exact in `R^1`).
fn localize(f: &TestFunction, ball: &Ball) -> Option<TestFunction> {
    let mut g = f.clone();
    for (a, s) in g.support.iter_mut().enumerate() {
        let lo = s[0].max(ball.center[a] - 2.0 * ball.radius);
        let hi = s[1].min(ball.center[a] + 2.0 * ball.radius);
        if !(hi > lo) {
            return None;
        }
        *s = [lo, hi];
    }
    Some(g)
}

/// Per-ball ratio
/// `||w chi_B||_inf |B|^{-1 - dt/n} int_B |I_{alpha_tilde} g| / prod ||f_i v_i||_{p_i}`
/// with `g_i = f_i chi_{2B}`.
pub fn run_local_lemma_experiment(
    f: &[TestFunction],
    alpha_tilde: f64,
    pair: &WeightVector,
    p: &ExponentVector,
    point: &ParameterPoint,
    family: &BallFamily,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_shapes(f, pair, p, point, family)?;
    let n = point.n as f64;
    if !(p.inv_aggregate() < alpha_tilde / n) {
        return precondition(format!("p = {} must exceed n/alpha_tilde = {}", p.aggregate(), n / alpha_tilde));
    }
    let mut report = ExperimentReport::new("local_lemma");
    // reverse Hölder evidence for v_i^{-p_i'}: necessary, not sufficient
    for i in 0..p.m() {
        if p.is_one(i) {
            report.labels.insert(format!("rh_evidence_{}", i + 1), "not applicable (p_i = 1)".into());
            continue;
        }
        let sigma = pair.v[i].pow(-p.conjugate(i));
        let rh = rh_quantity(&sigma, point.m as f64, family)?;
        report.stat(&format!("rh_sup_{}", i + 1), rh);
        if !rh.is_finite() {
            return precondition(format!("v_{}^(-p_{}') fails the reverse Hölder evidence check", i + 1, i + 1));
        }
        report.labels.insert(format!("rh_evidence_{}", i + 1), "evidence: finite empirical sup".into());
    }
    let den = input_norms(f, &pair.v, p);
    let rows: Vec<ProfileRow> = family
        .balls()
        .par_iter()
        .enumerate()
        .map(|(id, ball)| -> Result<ProfileRow> {
            let local: Option<Vec<TestFunction>> = f.iter().map(|fi| localize(fi, ball)).collect();
            let integral = match local {
                None => 0.0,
                Some(g) => {
                    let eval = |x: &[f64]| eval_i_alpha(&g, alpha_tilde, x, &cfg.quadrature).map(f64::abs).unwrap_or(f64::NAN);
                    ball_average(&eval, ball, &cfg.ball) * ball.volume()
                }
            };
            if integral.is_nan() {
                return domain("fractional integral failed inside the ball sweep");
            }
            let num = if integral == 0.0 {
                0.0
            } else {
                ball_sup_norm(&pair.w, ball) * ball.volume().powf(-1.0 - point.delta_tilde / n) * integral
            };
            Ok(ProfileRow { ball_id: id, radius: ball.radius, center: ball.center.clone(), numerator: num, denominator: den, value: num / den })
        })
        .collect::<Result<_>>()?;
    report
        .param("n", n)
        .param("m", point.m as f64)
        .param("alpha_tilde", alpha_tilde)
        .param("beta", point.beta)
        .param("delta", point.delta)
        .param("delta_tilde", point.delta_tilde)
        .param("p", p.aggregate());
    report.stat("input_norm_product", den);
    report.profile = rows;
    finish_ratio_run(&mut report, den, cfg);
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}
