//! Per-ball brackets of the weight classes.

use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Result};
use crate::geometry::{unit_ball_volume, Ball};
use crate::numeric::{ext_mul, ext_product};
use crate::params::{recip, ExponentVector, ParameterPoint};

use super::stats::{
    ball_integral_radial, full_space_integral, full_space_sup, outside_integral, outside_sup, power_average,
    radial_sup, RadialSupport,
};
use super::{Radial, WeightSpec, WeightVector};
use crate::geometry::BallFamily;

fn check_lengths(pair: &WeightVector, p: &ExponentVector, point: &ParameterPoint, ball: &Ball) -> Result<()> {
    if pair.m() != p.m() || p.m() != point.m {
        return domain(format!("length mismatch: {} weights, {} exponents, m = {}", pair.m(), p.m(), point.m));
    }
    if ball.dim() != point.n {
        return domain(format!("ball dimension {} differs from n = {}", ball.dim(), point.n));
    }
    Ok(())
}

/// `||w chi_B||_inf |B|^{-e}` with the convention that a vanishing lead
/// makes the whole bracket vanish.
fn lead(w: &WeightSpec, ball: &Ball, vol_exponent: f64) -> f64 {
    let s = RadialSupport::of(ball);
    ext_mul(radial_sup(&w.radial(), s.lo, s.hi), ball.volume().powf(-vol_exponent))
}

fn ball_sup(g: &Radial, ball: &Ball) -> f64 {
    let s = RadialSupport::of(ball);
    radial_sup(g, s.lo, s.hi)
}

/// `||g chi_B||_q` for `q` in `[1, inf]`.
fn ball_norm(g: &Radial, ball: &Ball, q: f64) -> f64 {
    if q.is_infinite() {
        ball_sup(g, ball)
    } else {
        ball_integral_radial(&g.pow(q), ball).powf(1.0 / q)
    }
}

/// Full bracket:
/// `||w chi_B||_inf |B|^{-(dt - delta)/n} prod_i (int v_i^{-p_i'} (|B|^{1/n} + |x_B - y|)^{-(n - beta/m + delta/m) p_i'} dy)^{1/p_i'}`,
/// with the sup form for `p_i = 1`.
pub fn hm_full_quantity(pair: &WeightVector, p: &ExponentVector, point: &ParameterPoint, ball: &Ball) -> Result<f64> {
    check_lengths(pair, p, point, ball)?;
    let n = point.n as f64;
    let l = lead(&pair.w, ball, (point.delta_tilde - point.delta) / n);
    if l == 0.0 {
        return Ok(0.0);
    }
    let shift = ball.volume().powf(1.0 / n);
    let decay = point.tail_decay();
    let factors = (0..p.m()).map(|i| {
        let vinv = pair.v[i].radial().pow(-1.0);
        if p.is_one(i) {
            full_space_sup(&vinv, ball, shift, decay)
        } else {
            let pc = p.conjugate(i);
            full_space_integral(&vinv.pow(pc), ball, shift, decay * pc).powf(1.0 / pc)
        }
    });
    Ok(ext_mul(l, ext_product(factors)))
}

/// Local bracket:
/// `||w chi_B||_inf |B|^{-(dt/n + 1/p - beta/n)} prod_{I1} ||v_i^{-1} chi_B||_inf prod_{I2} (avg_B v_i^{-p_i'})^{1/p_i'}`.
pub fn hm_local_quantity(pair: &WeightVector, p: &ExponentVector, point: &ParameterPoint, ball: &Ball) -> Result<f64> {
    check_lengths(pair, p, point, ball)?;
    let n = point.n as f64;
    let l = lead(&pair.w, ball, point.delta_tilde / n + p.inv_aggregate() - point.beta / n);
    if l == 0.0 {
        return Ok(0.0);
    }
    let factors = (0..p.m()).map(|i| {
        let vinv = pair.v[i].radial().pow(-1.0);
        if p.is_one(i) {
            ball_sup(&vinv, ball)
        } else {
            let pc = p.conjugate(i);
            power_average(&vinv, ball, pc)
        }
    });
    Ok(ext_mul(l, ext_product(factors)))
}

/// Global bracket: the tail factors over `R^n \ B` against
/// `|x_B - y|^{-(n - beta/m + delta/m)}`.
pub fn hm_global_quantity(pair: &WeightVector, p: &ExponentVector, point: &ParameterPoint, ball: &Ball) -> Result<f64> {
    check_lengths(pair, p, point, ball)?;
    let n = point.n as f64;
    let l = lead(&pair.w, ball, (point.delta_tilde - point.delta) / n);
    if l == 0.0 {
        return Ok(0.0);
    }
    let decay = point.tail_decay();
    let factors = (0..p.m()).map(|i| outside_norm(&pair.v[i].radial().pow(-1.0), ball, decay, p.conjugate(i)));
    Ok(ext_mul(l, ext_product(factors)))
}

/// `|| g |x_B - .|^{-decay} chi_{R^n \ B} ||_q`.
fn outside_norm(g: &Radial, ball: &Ball, decay: f64, q: f64) -> f64 {
    if q.is_infinite() {
        outside_sup(g, ball, decay)
    } else {
        outside_integral(&g.pow(q), ball, decay * q).powf(1.0 / q)
    }
}

/// Element of `{0,1}^m` selecting, per slot, the ball (`1`) or its
/// complement (`0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SigmaPattern {
    pub bits: Vec<bool>,
}

impl SigmaPattern {
    pub fn new(bits: Vec<bool>) -> SigmaPattern {
        SigmaPattern { bits }
    }

    pub fn ones(m: usize) -> SigmaPattern {
        SigmaPattern { bits: vec![true; m] }
    }

    pub fn zeros(m: usize) -> SigmaPattern {
        SigmaPattern { bits: vec![false; m] }
    }

    /// All `2^m` patterns in binary counting order (bit `i` of the index is
    /// slot `i`).
    pub fn all(m: usize) -> Vec<SigmaPattern> {
        (0..1usize << m).map(|k| SigmaPattern { bits: (0..m).map(|i| k >> i & 1 == 1).collect() }).collect()
    }

    pub fn complement(&self) -> SigmaPattern {
        SigmaPattern { bits: self.bits.iter().map(|b| !b).collect() }
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// `sum_{sigma_i = 1} (1 - beta_i/n + delta/(mn))`.
    pub fn theta(&self, point: &ParameterPoint) -> f64 {
        self.weight() as f64 * point.tail_decay() / point.n as f64
    }
}

/// Mixed bracket:
/// `||w chi_B||_inf |B|^{-((dt - delta)/n + theta(sigma))} prod_{sigma_i = 1} ||v_i^{-1} chi_B||_{p_i'} prod_{sigma_i = 0} ||v_i^{-1} |x_B - .|^{-decay} chi_{R^n \ B}||_{p_i'}`.
pub fn hm_sigma_quantity(
    pair: &WeightVector,
    p: &ExponentVector,
    point: &ParameterPoint,
    ball: &Ball,
    sigma: &SigmaPattern,
) -> Result<f64> {
    check_lengths(pair, p, point, ball)?;
    if sigma.bits.len() != p.m() {
        return domain("sigma pattern length differs from m");
    }
    let n = point.n as f64;
    let l = lead(&pair.w, ball, (point.delta_tilde - point.delta) / n + sigma.theta(point));
    if l == 0.0 {
        return Ok(0.0);
    }
    let decay = point.tail_decay();
    let factors = (0..p.m()).map(|i| {
        let vinv = pair.v[i].radial().pow(-1.0);
        let q = p.conjugate(i);
        if sigma.bits[i] {
            ball_norm(&vinv, ball, q)
        } else {
            outside_norm(&vinv, ball, decay, q)
        }
    });
    Ok(ext_mul(l, ext_product(factors)))
}

/// Constant `c` with `hm_full >= c * hm_sigma` on every ball: inside the
/// ball `|B|^{1/n} + |x_B - y| <= (1 + c_n^{-1/n}) |B|^{1/n}`, outside it
/// `<= (1 + c_n^{1/n}) |x_B - y|`.
pub fn sigma_domination_constant(point: &ParameterPoint, sigma: &SigmaPattern) -> f64 {
    let n = point.n as f64;
    let cn = unit_ball_volume(point.n).powf(1.0 / n);
    let decay = point.tail_decay();
    sigma
        .bits
        .iter()
        .map(|&inside| if inside { (1.0 + 1.0 / cn).powf(-decay) } else { (1.0 + cn).powf(-decay) })
        .product()
}

/// `A_{p,q}` bracket:
/// `(avg_B (prod v_i)^q)^{1/q} prod_{I1} ||v_i^{-1} chi_B||_inf prod_{I2} (avg_B v_i^{-p_i'})^{1/p_i'}`,
/// with `||prod v_i chi_B||_inf` for `q = inf`.
pub fn a_pq_quantity(v: &[WeightSpec], p: &ExponentVector, q: f64, ball: &Ball) -> Result<f64> {
    if v.len() != p.m() {
        return domain("weight count differs from m");
    }
    if !(q > 0.0) {
        return domain(format!("q = {q} must be positive or infinite"));
    }
    let prod = v.iter().fold(Radial::one(), |acc, w| acc.mul(&w.radial()));
    let head = if q.is_infinite() { ball_sup(&prod, ball) } else { power_average(&prod, ball, q) };
    Ok(ext_mul(head, conjugate_factors(v, p, ball, |_, pc| pc)))
}

/// `prod_{I1} ||w_i^{-1} chi_B||_inf prod_{I2} (avg_B w_i^{-e(i, p_i')})^{1/p_i'}`.
fn conjugate_factors(w: &[WeightSpec], p: &ExponentVector, ball: &Ball, exponent: impl Fn(usize, f64) -> f64) -> f64 {
    ext_product((0..p.m()).map(|i| {
        let r = w[i].radial();
        if p.is_one(i) {
            ball_sup(&r.pow(-1.0), ball)
        } else {
            let pc = p.conjugate(i);
            let e = exponent(i, pc);
            let moment = ball_integral_radial(&r.pow(-e), ball);
            if moment.is_infinite() {
                f64::INFINITY
            } else {
                (moment / ball.volume()).powf(1.0 / pc)
            }
        }
    }))
}

/// `A_p` bracket:
/// `(avg_B prod w_i^{p/p_i})^{1/p} prod_{I1} ||w_i^{-1} chi_B||_inf prod_{I2} (avg_B w_i^{1 - p_i'})^{1/p_i'}`.
pub fn a_p_quantity(w: &[WeightSpec], p: &ExponentVector, ball: &Ball) -> Result<f64> {
    if w.len() != p.m() {
        return domain("weight count differs from m");
    }
    let inv = p.inv_aggregate();
    if inv == 0.0 {
        return domain("aggregate exponent p is infinite (every p_i = inf)");
    }
    let agg = 1.0 / inv;
    let prod = (0..p.m()).fold(Radial::one(), |acc, i| acc.mul(&w[i].radial().pow(p.inv(i))));
    let head = power_average(&prod, ball, agg);
    Ok(ext_mul(head, conjugate_factors(w, p, ball, |_, pc| pc - 1.0)))
}

/// Output of [`apq_to_ap_transform`].
#[derive(Debug, Clone, PartialEq)]
pub struct ApTransform {
    pub ell: ExponentVector,
    /// Aggregate `ell` with `1/ell = sum 1/ell_i`.
    pub ell_aggregate: f64,
    pub lambda: f64,
    pub z: Vec<WeightSpec>,
}

/// `lambda = 1/(mp)' + 1/(mq)`, `ell_i = 1` on `I1` and `(lambda p_i')'` on
/// `I2`, `z_i = w_i^{q ell_i / ell}`.
pub fn apq_to_ap_transform(w: &[WeightSpec], p: &ExponentVector, q: f64) -> Result<ApTransform> {
    if w.len() != p.m() {
        return domain("weight count differs from m");
    }
    if !(q > 0.0 && q.is_finite()) {
        return domain(format!("q = {q} must be a positive real"));
    }
    let m = p.m() as f64;
    let inv_p = p.inv_aggregate();
    for i in 0..p.m() {
        let h = p.inv(i) + 1.0 / (m * q) - inv_p / m;
        if !(h > 0.0) {
            return precondition(format!(
                "1/p_{} + 1/(mq) - 1/(mp) = {h} must be positive (at i = {})",
                i + 1,
                i + 1
            ));
        }
    }
    let lambda = 1.0 - inv_p / m + 1.0 / (m * q);
    let mut ell = Vec::with_capacity(p.m());
    for i in 0..p.m() {
        if p.is_one(i) {
            ell.push(1.0);
        } else {
            let x = lambda * p.conjugate(i);
            if !(x > 1.0) {
                return precondition(format!("lambda p_{}' = {x} must exceed 1", i + 1));
            }
            ell.push(x / (x - 1.0));
        }
    }
    let inv_ell: f64 = ell.iter().map(|&e| recip(e)).sum();
    let ell_aggregate = 1.0 / inv_ell;
    let z = (0..p.m()).map(|i| w[i].pow(q * ell[i] * inv_ell)).collect();
    Ok(ApTransform { ell: ExponentVector::new(ell)?, ell_aggregate, lambda, z })
}

/// `sup_B (avg_B w^s)^{1/s} / avg_B w`; `s = inf` uses the ball sup.
pub fn rh_quantity(w: &WeightSpec, s: f64, family: &BallFamily) -> Result<f64> {
    if !(s > 1.0) {
        return domain(format!("reverse Hölder exponent s = {s} must exceed 1"));
    }
    let g = w.radial();
    let res = super::empirical_class_sup(family, |ball| {
        let num = if s.is_infinite() { ball_sup(&g, ball) } else { power_average(&g, ball, s) };
        let den = power_average(&g, ball, 1.0);
        Ok(if num == 0.0 && den == 0.0 { 1.0 } else { num / den })
    })?;
    Ok(res.sup)
}

/// `sup_B w(2B) / w(B)`.
pub fn doubling_quantity(w: &WeightSpec, family: &BallFamily) -> Result<f64> {
    let g = w.radial();
    let res = super::empirical_class_sup(family, |ball| {
        let big = ball_integral_radial(&g, &ball.dilate(2.0));
        let small = ball_integral_radial(&g, ball);
        Ok(if small == 0.0 { if big == 0.0 { 1.0 } else { f64::INFINITY } } else { big / small })
    })?;
    Ok(res.sup)
}
