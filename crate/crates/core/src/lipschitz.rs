//! Ball averages, oscillations and the weighted Lipschitz seminorm
//! estimated over ball families.
//!
//! In `R^1` a ball is split at the configured singular points (integrated
//! with geometric grading toward them) and, when requested, at the roots of
//! `f - f_B`, so the kink of `|f - f_B|` never sits inside a panel. In `R^2`
//! the ball is integrated in polar coordinates about its centre; higher
//! dimensions use a tensor rule on the bounding cube.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{dist, Ball, BallFamily};
use crate::numeric::{ext_mul, gauss_legendre, gl_interval, graded, linspace, Grading};
use crate::weights::{ball_sup_norm, empirical_class_sup, SweepResult, WeightSpec};

/// A function that can be sampled pointwise from many threads.
pub type Evaluable<'a> = dyn Fn(&[f64]) -> f64 + Sync + 'a;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallQuadrature {
    /// Gauss–Legendre points per panel.
    #[serde(default = "default_order")]
    pub order: usize,
    /// Uniform panels on every smooth piece (and per radial/angular axis).
    #[serde(default = "default_panels")]
    pub panels: usize,
    /// Grading levels toward singular points.
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// Points of `R^1` where `f` may fail to be smooth.
    #[serde(default)]
    pub singular_points: Vec<f64>,
    /// Split at roots of `f - f_B` before integrating `|f - f_B|` (`R^1`).
    #[serde(default = "yes")]
    pub split_at_roots: bool,
}

fn default_order() -> usize {
    10
}
fn default_panels() -> usize {
    4
}
fn default_levels() -> usize {
    40
}
fn yes() -> bool {
    true
}

impl Default for BallQuadrature {
    fn default() -> Self {
        BallQuadrature { order: 10, panels: 4, levels: 40, singular_points: vec![], split_at_roots: true }
    }
}

impl BallQuadrature {
    pub fn with_singular_points(mut self, pts: Vec<f64>) -> Self {
        self.singular_points = pts;
        self
    }

    fn grading(&self) -> Grading {
        Grading { levels: self.levels, order: self.order }
    }

    fn is_singular(&self, t: f64) -> bool {
        self.singular_points.iter().any(|&s| s == t)
    }

    /// `int_a^b g` in `R^1`, split at singular points and `extra` cuts.
    fn line(&self, g: &mut impl FnMut(f64) -> f64, a: f64, b: f64, extra: &[f64]) -> f64 {
        let mut cuts: Vec<f64> = vec![a, b];
        cuts.extend(self.singular_points.iter().chain(extra).copied().filter(|&t| t > a && t < b));
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (l, r) = (w[0], w[1]);
            let toward = (self.is_singular(l), self.is_singular(r));
            if toward == (false, false) {
                let h = (r - l) / self.panels as f64;
                total += (0..self.panels).map(|k| gl_interval(g, l + k as f64 * h, l + (k + 1) as f64 * h, self.order)).sum::<f64>();
            } else {
                total += graded(g, l, r, toward, self.grading());
            }
        }
        total
    }

    /// Roots of `g` on `[a, b]` located by sign changes on a uniform scan
    /// and refined by bisection.
    fn roots(&self, g: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Vec<f64> {
        let scan = linspace(a, b, 8 * self.panels * self.order + 1);
        let vals: Vec<f64> = scan.iter().map(|&t| g(t)).collect();
        let mut out = Vec::new();
        for k in 0..scan.len() - 1 {
            let (mut lo, mut hi) = (scan[k], scan[k + 1]);
            let (mut glo, ghi) = (vals[k], vals[k + 1]);
            if glo == 0.0 && k > 0 {
                out.push(lo);
                continue;
            }
            if !(glo * ghi < 0.0) {
                continue;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (gm < 0.0) == (glo < 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }

    /// `int_B g` for `g` on `R^n`.
    fn ball(&self, g: &Evaluable, ball: &Ball) -> f64 {
        let n = ball.dim();
        let c = &ball.center;
        let r = ball.radius;
        match n {
            1 => self.line(&mut |t: f64| g(&[t]), c[0] - r, c[0] + r, &[]),
            2 => self.disc(g, c, r),
            _ => self.cube(g, ball),
        }
    }

    /// Polar rule about the centre; a centre at the origin (where radial
    /// weights and symbols are singular) gets radial grading toward it.
    fn disc(&self, g: &Evaluable, c: &[f64], r: f64) -> f64 {
        let angles = 4 * self.order * self.panels;
        let dphi = std::f64::consts::TAU / angles as f64;
        let mut radial = |rho: f64| {
            let s: f64 = (0..angles)
                .map(|k| {
                    let phi = (k as f64 + 0.5) * dphi;
                    g(&[c[0] + rho * phi.cos(), c[1] + rho * phi.sin()])
                })
                .sum();
            s * dphi * rho
        };
        if c.iter().all(|&v| v == 0.0) {
            return graded(&mut radial, 0.0, r, (true, false), self.grading());
        }
        let h = r / self.panels as f64;
        (0..self.panels).map(|k| gl_interval(&mut radial, k as f64 * h, (k + 1) as f64 * h, self.order)).sum()
    }

    fn cube(&self, g: &Evaluable, ball: &Ball) -> f64 {
        let n = ball.dim();
        let rule = gauss_legendre(self.order);
        let per_axis = self.panels * self.order;
        let h = 2.0 * ball.radius / self.panels as f64;
        let mut total = 0.0;
        let mut y = vec![0.0; n];
        for code in 0..per_axis.pow(n as u32) {
            let mut rest = code;
            let mut w = 1.0;
            for (a, ya) in y.iter_mut().enumerate() {
                let k = rest % per_axis;
                rest /= per_axis;
                let (panel, node) = (k / self.order, k % self.order);
                let lo = ball.center[a] - ball.radius + panel as f64 * h;
                *ya = lo + 0.5 * h * (1.0 + rule.nodes[node]);
                w *= 0.5 * h * rule.weights[node];
            }
            if dist(&y, &ball.center) < ball.radius {
                total += w * g(&y);
            }
        }
        total
    }
}

/// `|B|^{-1} int_B f`.
pub fn ball_average(f: &Evaluable, ball: &Ball, cfg: &BallQuadrature) -> f64 {
    cfg.ball(f, ball) / ball.volume()
}

/// `int_B |f - f_B|`. `f` is sampled once per node: the average and the
/// deviation share their evaluations.
pub fn oscillation(f: &Evaluable, ball: &Ball, cfg: &BallQuadrature) -> f64 {
    let memo = Memo::new(f);
    let f = &|x: &[f64]| memo.eval(x);
    let avg = ball_average(f, ball, cfg);
    if memo.constant() {
        return 0.0;
    }
    if ball.dim() == 1 && cfg.split_at_roots {
        let (a, b) = (ball.center[0] - ball.radius, ball.center[0] + ball.radius);
        let roots = cfg.roots(&mut |t: f64| f(&[t]) - avg, a, b);
        return cfg.line(&mut |t: f64| (f(&[t]) - avg).abs(), a, b, &roots);
    }
    let dev = |x: &[f64]| (f(x) - avg).abs();
    cfg.ball(&dev, ball)
}

struct Memo<'a, 'b> {
    f: &'a Evaluable<'b>,
    seen: Mutex<HashMap<Vec<u64>, f64>>,
}

impl<'a, 'b> Memo<'a, 'b> {
    fn new(f: &'a Evaluable<'b>) -> Self {
        Memo { f, seen: Mutex::new(HashMap::new()) }
    }

    /// Every value sampled so far is the same.
    fn constant(&self) -> bool {
        let seen = self.seen.lock().unwrap();
        let mut values = seen.values();
        match values.next() {
            Some(first) => values.all(|v| v == first),
            None => true,
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let key: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
        if let Some(v) = self.seen.lock().unwrap().get(&key) {
            return *v;
        }
        let v = (self.f)(x);
        self.seen.lock().unwrap().insert(key, v);
        v
    }
}

/// `||w chi_B||_inf |B|^{-(1 + delta_tilde/n)} int_B |f - f_B|`; `0` when
/// the oscillation vanishes, even against an unbounded weight.
pub fn weighted_lipschitz_quotient(f: &Evaluable, w: &WeightSpec, delta_tilde: f64, ball: &Ball, cfg: &BallQuadrature) -> f64 {
    let osc = oscillation(f, ball, cfg);
    let n = ball.dim() as f64;
    ext_mul(ball_sup_norm(w, ball), ball.volume().powf(-(1.0 + delta_tilde / n)) * osc)
}

/// Empirical `||f||_{L_w(delta_tilde)}` over the family: a lower bound with
/// its per-ball profile.
pub fn seminorm_estimate(
    f: &Evaluable,
    w: &WeightSpec,
    delta_tilde: f64,
    family: &BallFamily,
    cfg: &BallQuadrature,
) -> Result<SweepResult> {
    empirical_class_sup(family, |b| Ok(weighted_lipschitz_quotient(f, w, delta_tilde, b, cfg)))
}

/// Evaluate `f` at many points in parallel, preserving order.
pub fn sample_parallel(f: &Evaluable, points: &[Vec<f64>]) -> Vec<f64> {
    points.par_iter().map(|x| f(x)).collect()
}
