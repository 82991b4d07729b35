//! Scalar numerics shared by every module: Gauss–Legendre rules, graded
//! composite integration toward endpoint singularities, dyadic tails,
//! extended-real arithmetic and least-squares slopes.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

const MAX_ORDER: usize = 48;

/// Nodes and weights of a Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Cached Gauss–Legendre rule of the given order (1 is the midpoint rule).
pub fn gauss_legendre(order: usize) -> &'static Rule {
    static CACHE: OnceLock<Vec<Rule>> = OnceLock::new();
    let rules = CACHE.get_or_init(|| {
        (1..=MAX_ORDER)
            .map(|k| {
                if k == 1 {
                    return Rule { nodes: vec![0.0], weights: vec![2.0] };
                }
                let gl = GaussLegendre::new(NonZeroUsize::new(k).unwrap());
                let (nodes, weights) = gl.as_node_weight_pairs().iter().copied().unzip();
                Rule { nodes, weights }
            })
            .collect()
    });
    &rules[order.clamp(1, MAX_ORDER) - 1]
}

/// Gauss–Legendre on `[a, b]`. Nodes are placed relative to the nearer
/// endpoint so that points close to `a` or `b` keep full relative precision.
pub fn gl_interval(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let x = if t <= 0.0 { a + h * (1.0 + t) } else { b - h * (1.0 - t) };
        acc += w * f(x);
    }
    acc * h
}

/// Settings for [`graded`].
#[derive(Debug, Clone, Copy)]
pub struct Grading {
    pub levels: usize,
    pub order: usize,
}

impl Default for Grading {
    fn default() -> Self {
        Grading { levels: 48, order: 10 }
    }
}

/// Integral over `[a, b]` with geometric grading toward the endpoints
/// flagged in `toward`. The unresolved innermost piece at a graded endpoint
/// is extrapolated from the ratio of the last two pieces, which is exact for
/// pure power behaviour; a ratio `>= 1` signals divergence and yields `+inf`.
pub fn graded(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, toward: (bool, bool), g: Grading) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    match toward {
        (false, false) => gl_interval(f, a, b, g.order),
        (true, false) => graded_left(f, a, b, g, a.abs()),
        (false, true) => {
            let mut r = |t: f64| f(a + b - t);
            graded_left(&mut r, a, b, g, b.abs())
        }
        (true, true) => {
            let mid = 0.5 * (a + b);
            let left = graded_left(f, a, mid, g, a.abs());
            let mut r = |t: f64| f(mid + b - t);
            left + graded_left(&mut r, mid, b, g, b.abs())
        }
    }
}

/// Pieces narrower than this fraction of the anchor's magnitude lose
/// relative precision in `x - anchor`, so grading stops there.
const ANCHOR_RESOLUTION: f64 = 1e-8;

fn graded_left(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, g: Grading, anchor: f64) -> f64 {
    let h = b - a;
    let levels = usable_levels(h, anchor, ANCHOR_RESOLUTION, g.levels);
    let mut sum = 0.0;
    let mut last = 0.0;
    let mut prev = 0.0;
    for k in 0..levels {
        let hi = a + h * 0.5f64.powi(k as i32);
        let lo = a + h * 0.5f64.powi(k as i32 + 1);
        let piece = gl_interval(f, lo, hi, g.order);
        if !piece.is_finite() {
            return piece;
        }
        sum += piece;
        prev = last;
        last = piece;
    }
    let inner_hi = a + h * 0.5f64.powi(levels as i32);
    let tail = if prev != 0.0 && last / prev > 0.0 {
        let q = last / prev;
        if q >= 1.0 - 1e-9 {
            return f64::INFINITY * sum.signum();
        }
        last * q / (1.0 - q)
    } else {
        gl_interval(f, a, inner_hi, g.order)
    };
    sum + tail
}

/// Number of halvings of `h` (at most `levels`) that stay above
/// `resolution * anchor`; at least two, so an extrapolation ratio exists.
pub(crate) fn usable_levels(h: f64, anchor: f64, resolution: f64, levels: usize) -> usize {
    if anchor == 0.0 {
        return levels;
    }
    let room = (h / (resolution * anchor)).log2().floor();
    if room.is_finite() && room < levels as f64 {
        (room.max(2.0)) as usize
    } else {
        levels
    }
}

/// Integral over `[a, inf)` by doubling pieces. `decay` is the known power
/// exponent of the integrand at infinity (`None` for faster-than-power
/// decay); the run stops once the power-law tail bound falls below
/// `rel_tol` times the accumulated sum and the bound is added.
pub fn dyadic_tail(f: &mut impl FnMut(f64) -> f64, a: f64, decay: Option<f64>, rel_tol: f64, order: usize) -> f64 {
    if let Some(e) = decay {
        if e >= -1.0 {
            return f64::INFINITY;
        }
    }
    let mut lo = a.max(f64::MIN_POSITIVE);
    let mut sum = 0.0;
    let mut prev_piece = f64::NAN;
    for _ in 0..2000 {
        let hi = 2.0 * lo;
        let piece = gl_interval(f, lo, hi, order);
        if !piece.is_finite() {
            return piece;
        }
        sum += piece;
        let tail = match decay {
            Some(e) => {
                let fr = f(hi);
                fr * hi / (-e - 1.0)
            }
            None => {
                let q = piece / prev_piece;
                if q.is_finite() && q > 0.0 && q < 1.0 { piece * q / (1.0 - q) } else { piece }
            }
        };
        if tail.abs() <= rel_tol * sum.abs() || sum == 0.0 && piece == 0.0 && hi > 1e6 * a.max(1.0) {
            return sum + if decay.is_some() { tail } else { 0.0 };
        }
        prev_piece = piece;
        lo = hi;
        if !lo.is_finite() {
            break;
        }
    }
    sum
}

/// Extended-real product with the measure-theoretic convention `0 * inf = 0`.
pub fn ext_mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Product of a list of extended reals, `0 * inf = 0`.
pub fn ext_product(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(1.0, ext_mul)
}

/// `n` evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` log-evenly spaced values from `a` to `b` inclusive (`a, b > 0`).
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n).into_iter().map(f64::exp).collect()
}

/// Least-squares slope of `log y` against `log x` over points with finite,
/// positive coordinates. `None` if fewer than two such points remain.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Maximum of `f` on `[a, b]` by dense sampling followed by golden-section
/// refinement around the best sample. `f` may return `+inf`.
pub fn maximize(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, samples: usize) -> f64 {
    if !(b >= a) {
        return f64::NEG_INFINITY;
    }
    if b == a {
        return f(a);
    }
    let xs = linspace(a, b, samples.max(3));
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for (i, &v) in vals.iter().enumerate() {
        if v > best || v.is_nan() && best == f64::NEG_INFINITY {
            best = v;
            best_i = i;
        }
    }
    if best == f64::INFINITY {
        return best;
    }
    let lo = xs[best_i.saturating_sub(1)];
    let hi = xs[(best_i + 1).min(xs.len() - 1)];
    best.max(golden_max(f, lo, hi, 60))
}

fn golden_max(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.max(fd);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        best = best.max(fc).max(fd);
    }
    best
}
