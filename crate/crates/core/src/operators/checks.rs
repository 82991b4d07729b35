use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::dist;
use crate::numeric::linspace;

use super::engine::QuadratureConfig;
use super::evaluate::{eval_i_alpha, eval_t_alpha};
use super::{KernelForm, KernelSpec, SymbolSpec, TestFunction};

/// Slack allowed over a declared constant.
pub const DECLARED_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelWitness {
    pub x: Vec<f64>,
    pub x_prime: Vec<f64>,
    pub y: Vec<f64>,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub samples: usize,
    pub seed: u64,
    /// `sum |x - y_i| > region_factor * |x - x'|` on every smoothness sample.
    pub region_factor: f64,
    pub size_ratio: f64,
    pub size_witness: KernelWitness,
    pub size_pass: bool,
    /// Constant the smoothness ratio is measured against, if known.
    pub smooth_constant: Option<f64>,
    pub smooth_ratio: f64,
    pub smooth_witness: KernelWitness,
    pub smooth_pass: Option<bool>,
}

impl KernelReport {
    pub fn pass(&self) -> bool {
        self.size_pass && self.smooth_pass.unwrap_or(true)
    }
}

/// Sample the size and smoothness conditions of `k` in dimension `n` with
/// `m` inputs. Points `x` lie in `[-2, 2]^n`; the `y_i` sit at log-uniform
/// distances from `x` so the diagonal is probed down to `1e-6`.
///
/// The smoothness region is `sum |x - y_i| > 2m |x - x'|`: with the factor
/// `2` alone `x'` may land on the diagonal when `m >= 2`.
pub fn kernel_condition_check(k: &KernelSpec, n: usize, m: usize, samples: usize, seed: u64) -> KernelReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let region = 2.0 * m as f64;
    let smooth_constant = k.c_smooth.or(match k.form {
        KernelForm::Standard => Some(KernelSpec::standard_smoothness_constant(k.alpha, n, m)),
        KernelForm::Scaled { factor } => Some(factor.abs() * KernelSpec::standard_smoothness_constant(k.alpha, n, m)),
        _ => None,
    });
    let empty = KernelWitness { x: vec![], x_prime: vec![], y: vec![], ratio: 0.0 };
    let mut size = empty.clone();
    let mut smooth = empty;
    let unit = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = dist(&v, &vec![0.0; n]);
            if r > 1e-3 && r <= 1.0 {
                return v.iter().map(|c| c / r).collect();
            }
        }
    };
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut y = Vec::with_capacity(n * m);
        for _ in 0..m {
            let r = 10f64.powf(rng.gen_range(-6.0..0.6));
            let d = unit(&mut rng);
            y.extend(x.iter().zip(&d).map(|(a, b)| a + r * b));
        }
        let u: f64 = y.chunks(n).map(|yi| dist(&x, yi)).sum();
        let bound = u.powf(k.alpha - (n * m) as f64);
        let kx = k.eval(&x, &y);
        let rs = kx.abs() / (k.c_size * bound);
        if rs > size.ratio || rs.is_nan() {
            size = KernelWitness { x: x.clone(), x_prime: x.clone(), y: y.clone(), ratio: rs };
        }
        let h = u / region * rng.gen_range(1e-3..0.999);
        let d = unit(&mut rng);
        let xp: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + h * b).collect();
        let diff = (kx - k.eval(&xp, &y)).abs();
        let sbound = h.powf(k.gamma) * u.powf(k.alpha - (n * m) as f64 - k.gamma);
        let rm = diff / (sbound * smooth_constant.unwrap_or(1.0));
        if rm > smooth.ratio || rm.is_nan() {
            smooth = KernelWitness { x: x.clone(), x_prime: xp, y, ratio: rm };
        }
    }
    let size_pass = size.ratio <= 1.0 + DECLARED_SLACK;
    let smooth_pass = smooth_constant.map(|_| smooth.ratio <= 1.0 + DECLARED_SLACK);
    KernelReport {
        samples,
        seed,
        region_factor: region,
        size_ratio: size.ratio,
        size_witness: size,
        size_pass,
        smooth_constant,
        smooth_ratio: smooth.ratio,
        smooth_witness: smooth,
        smooth_pass,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationRow {
    pub x: Vec<f64>,
    pub t_value: f64,
    pub dominating: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    pub rows: Vec<DominationRow>,
    /// Largest `|T f| / (C_size I(|f|))` over points with a nonzero bound.
    pub max_ratio: f64,
    pub pass: bool,
}

/// Check `|T f(x)| <= C_size I(|f|)(x)` at each sample point, up to the
/// configured relative tolerance.
pub fn pointwise_domination_check(
    k: &KernelSpec,
    f: &[TestFunction],
    points: &[Vec<f64>],
    cfg: &QuadratureConfig,
) -> Result<DominationReport> {
    let abs: Vec<TestFunction> = f.iter().map(TestFunction::abs).collect();
    let mut rows = Vec::with_capacity(points.len());
    let mut max_ratio: f64 = 0.0;
    let mut pass = true;
    for x in points {
        let t = eval_t_alpha(k, f, x, cfg)?;
        let dom = k.c_size * eval_i_alpha(&abs, k.alpha, x, cfg)?;
        if dom > 0.0 {
            max_ratio = max_ratio.max(t.abs() / dom);
        }
        pass &= t.abs() <= dom * (1.0 + cfg.tolerance) + f64::MIN_POSITIVE;
        rows.push(DominationRow { x: x.clone(), t_value: t, dominating: dom });
    }
    Ok(DominationReport { rows, max_ratio, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolReport {
    /// Lower bound for the Lipschitz constant from the grid.
    pub estimate: f64,
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
    pub declared: f64,
    pub pass: bool,
}

/// `max |b(x) - b(y)| / |x - y|^delta` over pairs of a uniform grid with
/// `grid` points per axis of the box.
pub fn symbol_constant_estimate(b: &SymbolSpec, domain: &[[f64; 2]], grid: usize) -> SymbolReport {
    let grid = grid.max(2);
    let axes: Vec<Vec<f64>> = domain.iter().map(|[lo, hi]| linspace(*lo, *hi, grid)).collect();
    let total = grid.pow(domain.len() as u32);
    let points: Vec<Vec<f64>> = (0..total)
        .map(|mut code| {
            axes.iter()
                .map(|ax| {
                    let v = ax[code % grid];
                    code /= grid;
                    v
                })
                .collect()
        })
        .collect();
    let values: Vec<f64> = points.iter().map(|p| b.eval(p)).collect();
    let mut estimate: f64 = 0.0;
    let mut witness = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let r = (values[i] - values[j]).abs() / dist(&points[i], &points[j]).powf(b.delta);
            if r > estimate {
                estimate = r;
                witness = Some((points[i].clone(), points[j].clone()));
            }
        }
    }
    SymbolReport { estimate, witness, declared: b.constant, pass: estimate <= b.constant * (1.0 + DECLARED_SLACK) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductIdentity {
    pub lhs: f64,
    pub rhs: f64,
    /// Sum of the absolute values of every term on both sides.
    pub scale: f64,
}

impl ProductIdentity {
    pub fn rel_error(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / self.scale
        }
    }
}

/// Both sides of
/// `prod(a_i - b_i) - prod(c_i - b_i) = sum_j (a_j - c_j) prod_{i<j}(a_i - b_i) prod_{i>j}(c_i - b_i)`.
pub fn difference_of_products(a: &[f64], b: &[f64], c: &[f64]) -> ProductIdentity {
    let m = a.len();
    assert!(b.len() == m && c.len() == m, "tuples of unequal length");
    let left: Vec<f64> = (0..m).map(|i| a[i] - b[i]).collect();
    let right: Vec<f64> = (0..m).map(|i| c[i] - b[i]).collect();
    let pa: f64 = left.iter().product();
    let pc: f64 = right.iter().product();
    let mut rhs = 0.0;
    let mut scale = pa.abs() + pc.abs();
    for j in 0..m {
        let term = (a[j] - c[j]) * left[..j].iter().product::<f64>() * right[j + 1..].iter().product::<f64>();
        rhs += term;
        scale += term.abs();
    }
    ProductIdentity { lhs: pa - pc, rhs, scale }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_kernel_passes_both_conditions() {
        for m in 1..=2 {
            let r = kernel_condition_check(&KernelSpec::standard(0.8), 1, m, 20_000, 7);
            assert!(r.pass(), "{r:?}");
        }
    }

    #[test]
    fn size_violation_is_found() {
        let k = KernelSpec::with_form(0.8, KernelForm::SizeViolating);
        let r = kernel_condition_check(&k, 1, 2, 2_000, 1);
        assert!(!r.size_pass);
        assert!(r.size_ratio > 10.0);
        assert_eq!(r.size_witness.y.len(), 2);
    }

    #[test]
    fn modulated_kernel_meets_size() {
        let k = KernelSpec::with_form(0.8, KernelForm::Modulated);
        assert!(kernel_condition_check(&k, 1, 2, 5_000, 3).size_pass);
    }

    #[test]
    fn power_symbol_constant() {
        let r = symbol_constant_estimate(&SymbolSpec::power(1, 0.3), &[[-1.0, 1.0]], 41);
        assert!(r.pass);
        assert!((r.estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_symbol_with_small_exponent_is_flagged() {
        let b = SymbolSpec { form: super::super::SymbolForm::Polynomial { coefs: vec![0.0, 1.0] }, delta: 0.3, constant: 1.0 };
        let r = symbol_constant_estimate(&b, &[[-1.0, 1.0]], 21);
        assert!((r.estimate - 2f64.powf(0.7)).abs() < 1e-12);
        assert!(!r.pass);
    }

    #[test]
    fn product_identity_example() {
        let id = difference_of_products(&[1.0, 2.0], &[0.0, 0.0], &[3.0, 5.0]);
        assert_eq!(id.lhs, -13.0);
        assert_eq!(id.rhs, -13.0);
    }
}
