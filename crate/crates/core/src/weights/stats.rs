//! Ball statistics of radial weights: sups, ball integrals, and the
//! full-space and outside-the-ball integrals that enter the tail factors.

use crate::geometry::{unit_sphere_area, Ball};
use crate::numeric::{dyadic_tail, gl_interval, graded, maximize, Grading};

use super::{Radial, WeightSpec};

/// Relative size of the neglected tail in the full-space integrals.
pub const TAIL_REL_TOL: f64 = 1e-10;

/// Radial range `[lo, hi]` covered by a ball: `|x|` for `x` in `B`.
#[derive(Debug, Clone, Copy)]
pub struct RadialSupport {
    pub lo: f64,
    pub hi: f64,
}

impl RadialSupport {
    pub fn of(ball: &Ball) -> RadialSupport {
        let c = ball.center_norm();
        RadialSupport { lo: (c - ball.radius).max(0.0), hi: c + ball.radius }
    }
}

/// `||w chi_B||_inf`.
pub fn ball_sup_norm(w: &WeightSpec, ball: &Ball) -> f64 {
    let s = RadialSupport::of(ball);
    radial_sup(&w.radial(), s.lo, s.hi)
}

/// `(|B|^{-1} int_B w^s)^{1/s}`; `+inf` whenever the moment diverges.
pub fn ball_power_average(w: &WeightSpec, ball: &Ball, s: f64) -> f64 {
    power_average(&w.radial(), ball, s)
}

pub(crate) fn power_average(g: &Radial, ball: &Ball, s: f64) -> f64 {
    let moment = ball_integral_radial(&g.pow(s), ball);
    if moment.is_infinite() {
        return f64::INFINITY;
    }
    (moment / ball.volume()).powf(1.0 / s)
}

/// `int_B w`.
pub fn ball_integral(w: &WeightSpec, ball: &Ball) -> f64 {
    ball_integral_radial(&w.radial(), ball)
}

/// Essential sup of a radial profile over `lo <= r <= hi`.
pub fn radial_sup(g: &Radial, lo: f64, hi: f64) -> f64 {
    if g.is_zero() {
        return 0.0;
    }
    if g.power < 0.0 && lo == 0.0 {
        return f64::INFINITY;
    }
    if g.is_pure_power() {
        let at = |r: f64| if r == 0.0 { if g.power > 0.0 { 0.0 } else { 1.0 } } else { r.powf(g.power) };
        return g.coef * at(lo).max(at(hi));
    }
    let mut f = |r: f64| g.eval(r);
    let mut best = f(lo).max(f(hi));
    let mut cuts = vec![lo];
    cuts.extend(g.breakpoints(lo, hi));
    cuts.push(hi);
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        // one-sided limits at table edges
        let eps = 1e-12 * (b - a);
        best = best.max(f(a + eps)).max(f(b - eps));
        best = best.max(maximize(&mut f, a + eps, b - eps, 96));
    }
    best
}

fn power_antiderivative(e: f64, a: f64, b: f64) -> f64 {
    // int_a^b r^e dr for 0 <= a < b
    let k = e + 1.0;
    if a == 0.0 {
        return if k > 0.0 { b.powf(k) / k } else { f64::INFINITY };
    }
    let t = (b / a).ln();
    if k == 0.0 {
        t
    } else {
        a.powf(k) * (k * t).exp_m1() / k
    }
}

/// `int_lo^hi g(r) r^{jac} dr`, closed form for pure powers.
fn radial_segment(g: &Radial, jac: f64, lo: f64, hi: f64) -> f64 {
    if !(hi > lo) || g.is_zero() {
        return 0.0;
    }
    if g.is_pure_power() {
        return g.coef * power_antiderivative(g.power + jac, lo, hi);
    }
    if lo == 0.0 && g.power + jac <= -1.0 {
        return f64::INFINITY;
    }
    let mut cuts = vec![lo];
    cuts.extend(g.breakpoints(lo, hi));
    cuts.push(hi);
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        let mut f = |r: f64| g.eval(r) * r.powf(jac);
        sum += graded(&mut f, w[0], w[1], (w[0] == 0.0, false), Grading::default());
    }
    sum
}

pub(crate) fn ball_integral_radial(g: &Radial, ball: &Ball) -> f64 {
    if g.is_zero() {
        return 0.0;
    }
    let n = ball.dim();
    let r = ball.radius;
    if n == 1 {
        let c = ball.center[0];
        let (a, b) = (c - r, c + r);
        return if a >= 0.0 {
            radial_segment(g, 0.0, a, b)
        } else if b <= 0.0 {
            radial_segment(g, 0.0, -b, -a)
        } else {
            radial_segment(g, 0.0, 0.0, -a) + radial_segment(g, 0.0, 0.0, b)
        };
    }
    let c = ball.center_norm();
    let jac = (n - 1) as f64;
    let omega = unit_sphere_area(n);
    if c == 0.0 {
        return omega * radial_segment(g, jac, 0.0, r);
    }
    let support = RadialSupport::of(ball);
    if support.lo == 0.0 && g.power + jac <= -1.0 {
        return f64::INFINITY;
    }
    // full spheres for r < R - |x_B|, caps beyond
    let inner = (r - c).max(0.0);
    let mut total = 0.0;
    if inner > 0.0 {
        total += omega * radial_segment(g, jac, 0.0, inner);
    }
    let lo = (c - r).abs();
    let mut cuts = vec![lo];
    cuts.extend(g.breakpoints(lo, c + r));
    cuts.push(c + r);
    for w in cuts.windows(2) {
        let mut f = |rho: f64| {
            let cosv = ((rho * rho + c * c - r * r) / (2.0 * rho * c)).clamp(-1.0, 1.0);
            g.eval(rho) * rho.powf(jac) * cap_measure(n, cosv.acos())
        };
        total += graded(&mut f, w[0], w[1], (true, true), Grading::default());
    }
    total
}

/// `omega_{n-2} int_0^phi sin^{n-2}`: measure of the unit-sphere cap of
/// angular radius `phi` (`n >= 2`).
fn cap_measure(n: usize, phi: f64) -> f64 {
    if n == 2 {
        return 2.0 * phi;
    }
    if n == 3 {
        return 2.0 * std::f64::consts::PI * (1.0 - phi.cos());
    }
    let k = (n - 2) as i32;
    unit_sphere_area(n - 1) * gl_interval(&mut |t: f64| t.sin().powi(k), 0.0, phi, 24)
}

/// Geometry of the tail factors: `h(s)` is applied to `s = |x_B - y|`.
#[derive(Clone, Copy)]
enum Tail {
    /// `(shift + s)^{-decay}` on all of `R^n`.
    Full { shift: f64, decay: f64 },
    /// `s^{-decay}` restricted to `s >= R`.
    Outside { decay: f64 },
}

impl Tail {
    fn h(&self, s: f64) -> f64 {
        match *self {
            Tail::Full { shift, decay } => (shift + s).powf(-decay),
            Tail::Outside { decay } => s.powf(-decay),
        }
    }

    fn decay(&self) -> f64 {
        match *self {
            Tail::Full { decay, .. } | Tail::Outside { decay } => decay,
        }
    }
}

/// `int_{|y| = rho} h(|x_B - y|) dsigma(y)` with the outside restriction.
fn sphere_mean(n: usize, c: f64, r: f64, tail: Tail, rho: f64) -> f64 {
    let restricted = matches!(tail, Tail::Outside { .. });
    if n == 1 {
        let mut acc = 0.0;
        for s in [(c - rho).abs(), c + rho] {
            if !restricted || s >= r {
                acc += tail.h(s);
            }
        }
        return acc;
    }
    let jac = rho.powi(n as i32 - 1);
    if c == 0.0 {
        return if !restricted || rho >= r { unit_sphere_area(n) * jac * tail.h(rho) } else { 0.0 };
    }
    let phi_lo = if restricted {
        let cosv = (rho * rho + c * c - r * r) / (2.0 * rho * c);
        if cosv < -1.0 {
            return 0.0;
        }
        cosv.min(1.0).acos()
    } else {
        0.0
    };
    let k = n as i32 - 2;
    let mut f = |phi: f64| {
        let s2 = rho * rho + c * c - 2.0 * rho * c * phi.cos();
        tail.h(s2.max(0.0).sqrt()) * phi.sin().powi(k)
    };
    let g = Grading { levels: 24, order: 8 };
    let inner = graded(&mut f, phi_lo, std::f64::consts::PI, (true, false), g);
    unit_sphere_area(n - 1) * jac * inner
}

fn tail_integral(g: &Radial, ball: &Ball, tail: Tail) -> f64 {
    if g.is_zero() {
        return 0.0;
    }
    let n = ball.dim();
    let c = ball.center_norm();
    let r = ball.radius;
    let origin_in_domain = match tail {
        Tail::Full { .. } => true,
        Tail::Outside { .. } => c >= r,
    };
    if origin_in_domain && g.power <= -(n as f64) {
        return f64::INFINITY;
    }
    if g.exp_sign() > 0.0 {
        return f64::INFINITY;
    }
    let decay_at_inf = g.exponent_at_infinity().map(|e| e + (n as f64 - 1.0) - tail.decay());
    if let Some(e) = decay_at_inf {
        if e >= -1.0 && g.table_tail_factor() > 0.0 {
            return f64::INFINITY;
        }
    }
    let shift = match tail {
        Tail::Full { shift, .. } => shift,
        Tail::Outside { .. } => 0.0,
    };
    let scale = c + r + shift + g.last_edge();
    let far = 4.0 * scale;
    let mut cuts = vec![0.0, c, (c - r).abs(), c + r, far];
    cuts.extend(g.breakpoints(0.0, far));
    cuts.retain(|x| *x >= 0.0 && *x <= far);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * scale);
    let mut integrand = |rho: f64| {
        let v = g.eval(rho);
        if v == 0.0 {
            0.0
        } else {
            v * sphere_mean(n, c, r, tail, rho)
        }
    };
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            total += graded(&mut integrand, w[0], w[1], (true, true), Grading::default());
        }
    }
    if total.is_infinite() {
        return total;
    }
    total + dyadic_tail(&mut integrand, far, decay_at_inf, TAIL_REL_TOL, 16)
}

/// `int_{R^n} g(|y|) (shift + |x_B - y|)^{-decay} dy`.
pub fn full_space_integral(g: &Radial, ball: &Ball, shift: f64, decay: f64) -> f64 {
    tail_integral(g, ball, Tail::Full { shift, decay })
}

/// `int_{|y - x_B| >= R} g(|y|) |x_B - y|^{-decay} dy`.
pub fn outside_integral(g: &Radial, ball: &Ball, decay: f64) -> f64 {
    tail_integral(g, ball, Tail::Outside { decay })
}

fn tail_sup(g: &Radial, ball: &Ball, tail: Tail) -> f64 {
    if g.is_zero() {
        return 0.0;
    }
    let n = ball.dim();
    let c = ball.center_norm();
    let r = ball.radius;
    let restricted = matches!(tail, Tail::Outside { .. });
    // smallest admissible |x_B - y| on the sphere |y| = rho
    let nearest = |rho: f64| -> Option<f64> {
        let near = (rho - c).abs();
        if !restricted {
            return Some(near);
        }
        if n == 1 {
            [near, rho + c].into_iter().filter(|s| *s >= r).fold(None, |m: Option<f64>, s| Some(m.map_or(s, |m| m.min(s))))
        } else if rho + c < r {
            None
        } else {
            Some(near.max(r))
        }
    };
    if g.power < 0.0 && nearest(0.0).is_some() {
        return f64::INFINITY;
    }
    if g.exp_sign() > 0.0 {
        return f64::INFINITY;
    }
    if let Some(e) = g.exponent_at_infinity() {
        if e - tail.decay() > 0.0 && g.table_tail_factor() > 0.0 {
            return f64::INFINITY;
        }
    }
    let mut f = |rho: f64| match nearest(rho) {
        Some(s) => {
            let v = g.eval(rho);
            if v == 0.0 {
                0.0
            } else {
                v * tail.h(s)
            }
        }
        None => 0.0,
    };
    let shift = match tail {
        Tail::Full { shift, .. } => shift,
        Tail::Outside { .. } => 0.0,
    };
    let scale = (c + r + shift + g.last_edge()).max(f64::MIN_POSITIVE);
    let mut cuts = vec![0.0, c, (c - r).abs(), c + r, (r - c).max(0.0)];
    cuts.extend(g.breakpoints(0.0, 1e12 * scale));
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut best = f64::NEG_INFINITY;
    for &x in &cuts {
        let eps = 1e-12 * scale;
        best = best.max(f(x)).max(f(x + eps));
        if x > eps {
            best = best.max(f(x - eps));
        }
    }
    for w in cuts.windows(2) {
        best = best.max(maximize(&mut f, w[0], w[1], 64));
    }
    let top = *cuts.last().unwrap();
    let mut flog = |t: f64| f(t.exp());
    let lo = (1e-12 * scale).ln();
    let hi = (1e12 * scale).ln();
    best = best.max(maximize(&mut flog, lo, hi, 400));
    best = best.max(maximize(&mut f, top, 4.0 * top + scale, 64));
    best.max(0.0)
}

/// `sup_y g(|y|) (shift + |x_B - y|)^{-decay}`.
pub fn full_space_sup(g: &Radial, ball: &Ball, shift: f64, decay: f64) -> f64 {
    tail_sup(g, ball, Tail::Full { shift, decay })
}

/// `sup_{|y - x_B| >= R} g(|y|) |x_B - y|^{-decay}`.
pub fn outside_sup(g: &Radial, ball: &Ball, decay: f64) -> f64 {
    tail_sup(g, ball, Tail::Outside { decay })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;

    fn b1(c: f64, r: f64) -> Ball {
        Ball::interval(c, r)
    }

    #[test]
    fn sup_norm_examples() {
        assert!((ball_sup_norm(&WeightSpec::power(0.4), &b1(0.0, 2.0)) - 2f64.powf(0.4)).abs() < 1e-15);
        assert!((ball_sup_norm(&WeightSpec::power(-0.5), &b1(3.0, 1.0)) - 2f64.powf(-0.5)).abs() < 1e-15);
        assert_eq!(ball_sup_norm(&WeightSpec::power(-0.5), &b1(0.0, 1.0)), f64::INFINITY);
        let w = WeightSpec::ShiftedPowerInverse { rho: 1.0, multiplicity: 1.0 };
        assert!((ball_sup_norm(&w, &b1(3.0, 1.0)) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn power_average_examples() {
        assert_eq!(ball_power_average(&WeightSpec::power(-0.5), &b1(0.0, 1.0), 1.0), 2.0);
        let v = ball_power_average(&WeightSpec::power(0.2), &b1(0.0, 1.0), -2.0);
        assert!((v - (5.0f64 / 3.0).powf(-0.5)).abs() < 1e-14);
        assert!((ball_power_average(&WeightSpec::constant(3.0), &b1(7.0, 0.1), 2.5) - 3.0).abs() < 1e-14);
        assert_eq!(ball_power_average(&WeightSpec::power(-0.6), &b1(0.0, 1.0), 2.0), f64::INFINITY);
    }

    #[test]
    fn two_dimensional_off_center_ball_integral() {
        // |x|^2 over B((3,0),1): int = |B| (|x_B|^2 + R^2/2)
        let ball = Ball::new(vec![3.0, 0.0], 1.0).unwrap();
        let v = ball_integral(&WeightSpec::power(2.0), &ball);
        let exact = std::f64::consts::PI * (9.0 + 0.5);
        assert!((v - exact).abs() < 1e-9 * exact, "{v} vs {exact}");
        // constant over a ball containing the origin off-centre
        let ball = Ball::new(vec![0.4, 0.0], 1.0).unwrap();
        let v = ball_integral(&WeightSpec::constant(1.0), &ball);
        assert!((v - std::f64::consts::PI).abs() < 1e-10, "{v}");
    }

    #[test]
    fn full_space_integral_closed_form_n1() {
        // int_R (1 + |y|)^{-2} dy = 2 with g = 1 centred at 0
        let v = full_space_integral(&Radial::one(), &b1(0.0, 0.5), 1.0, 2.0);
        assert!((v - 2.0).abs() < 1e-9, "{v}");
        // off-centre translation invariance for g = 1
        let v = full_space_integral(&Radial::one(), &b1(5.0, 0.5), 1.0, 2.0);
        assert!((v - 2.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn outside_integral_closed_form() {
        // n = 1: int_{|y - c| >= R} |c - y|^{-2} = 2/R
        let v = outside_integral(&Radial::one(), &b1(3.0, 0.5), 2.0);
        assert!((v - 4.0).abs() < 1e-9, "{v}");
        // n = 2: int_{|y| >= R} |y|^{-3} = 2 pi / R
        let ball = Ball::new(vec![0.0, 0.0], 2.0).unwrap();
        let v = outside_integral(&Radial::one(), &ball, 3.0);
        assert!((v - std::f64::consts::PI).abs() < 1e-9, "{v}");
        // n = 2 off-centre, translation invariant for g = 1
        let ball = Ball::new(vec![1.5, 0.0], 2.0).unwrap();
        let v = outside_integral(&Radial::one(), &ball, 3.0);
        assert!((v - std::f64::consts::PI).abs() < 1e-7, "{v}");
    }

    #[test]
    fn divergent_tails_are_infinite() {
        assert_eq!(outside_integral(&Radial::one(), &b1(0.0, 1.0), 1.0), f64::INFINITY);
        let g = WeightSpec::power(-1.0).radial();
        assert_eq!(full_space_integral(&g, &b1(3.0, 1.0), 1.0, 2.0), f64::INFINITY);
        assert_eq!(outside_sup(&WeightSpec::power(0.5).radial(), &b1(0.0, 1.0), 0.2), f64::INFINITY);
    }

    #[test]
    fn sups_of_tail_factors() {
        // sup_{|y|>=R} |y|^{-1} = 1/R
        let v = outside_sup(&Radial::one(), &b1(0.0, 2.0), 1.0);
        assert!((v - 0.5).abs() < 1e-12);
        // sup_y e^{-|y|} (1 + |y|)^{-1} at y = 0
        let g = WeightSpec::Exponential.pow(-1.0).radial();
        let v = full_space_sup(&g, &b1(0.0, 1.0), 1.0, 1.0);
        assert!((v - 1.0).abs() < 1e-12);
    }
}
