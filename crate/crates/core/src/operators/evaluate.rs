use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

use super::engine::{integrate, QuadratureConfig};
use super::{KernelSpec, SymbolSpec, TestFunction};

/// Formulation of the sum-type commutator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumMode {
    /// `sum_j (b_j(x) - b_j(y_j))` inside the kernel integral.
    Direct,
    /// `sum_j (b_j(x) T(f) - T(..., b_j f_j, ...))`.
    Iterative,
}

/// Formulation of the product-type commutator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMode {
    /// `prod_i (b_i(x) - b_i(y_i))` inside the kernel integral.
    Direct,
    /// Signed sum over subsets of which slots carry their symbol.
    Expansion,
    /// Nested single-slot commutators.
    Iterative,
}

pub(crate) const MAX_NM: usize = 4;

/// Validated shape `(n, m)` of a call.
fn shape(x: &[f64], f: &[TestFunction], alpha: f64) -> Result<(usize, usize)> {
    let n = x.len();
    let m = f.len();
    if n == 0 || m == 0 {
        return domain("need n >= 1 and at least one input");
    }
    if n * m > MAX_NM {
        return Err(Error::DimensionBudget { nm: n * m });
    }
    if let Some(i) = f.iter().position(|fi| fi.dim() != n) {
        return domain(format!("input {} lives in dimension {}, x in {n}", i + 1, f[i].dim()));
    }
    if !(alpha > 0.0 && alpha < (n * m) as f64) {
        return domain(format!("alpha = {alpha} must lie in (0, {})", n * m));
    }
    Ok((n, m))
}

fn check_symbols(b: &[SymbolSpec], m: usize) -> Result<()> {
    if b.len() != m {
        return domain(format!("{} symbols for {m} inputs", b.len()));
    }
    Ok(())
}

/// Support boxes flattened to one interval per coordinate of `R^{mn}`.
fn boxes(f: &[TestFunction], cfg: &QuadratureConfig) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    for fi in f {
        for (a, [lo, hi]) in fi.support.iter().enumerate() {
            let (mut lo, mut hi) = (*lo, *hi);
            if let Some(t) = cfg.truncation.as_ref().and_then(|t| t.get(a)) {
                lo = lo.max(t[0]);
                hi = hi.min(t[1]);
            }
            out.push([lo, hi]);
        }
    }
    out
}

/// `T(f_1 b_1^{e_1}, ..., f_m b_m^{e_m})(x)` with `e_i` the bits of `mask`.
fn apply_masked(k: &KernelSpec, f: &[TestFunction], b: &[SymbolSpec], mask: u32, x: &[f64], cfg: &QuadratureConfig) -> f64 {
    let n = x.len();
    let kernel = |y: &[f64]| k.eval(x, y);
    let g = |y: &[f64]| {
        let mut acc = 1.0;
        for (i, yi) in y.chunks(n).enumerate() {
            acc *= f[i].eval(yi);
            if acc == 0.0 {
                return 0.0;
            }
            if mask >> i & 1 == 1 {
                acc *= b[i].eval(yi);
            }
        }
        acc
    };
    let diag: Vec<f64> = (0..f.len()).flat_map(|_| x.iter().copied()).collect();
    integrate(&kernel, &g, &diag, &boxes(f, cfg), cfg)
}

fn diag(x: &[f64], m: usize) -> Vec<f64> {
    (0..m).flat_map(|_| x.iter().copied()).collect()
}

/// Multilinear fractional integral of order `alpha` at `x`.
pub fn eval_i_alpha(f: &[TestFunction], alpha: f64, x: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    eval_t_alpha(&KernelSpec::standard(alpha), f, x, cfg)
}

/// Kernel operator `T(f_1, ..., f_m)(x)`.
pub fn eval_t_alpha(k: &KernelSpec, f: &[TestFunction], x: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    shape(x, f, k.alpha)?;
    Ok(apply_masked(k, f, &[], 0, x, cfg))
}

/// Sum-type commutator `sum_j [b_j, T]_j (f)(x)`.
pub fn eval_sum_commutator(
    b: &[SymbolSpec],
    k: &KernelSpec,
    f: &[TestFunction],
    x: &[f64],
    cfg: &QuadratureConfig,
    mode: SumMode,
) -> Result<f64> {
    cfg.validate()?;
    let (n, m) = shape(x, f, k.alpha)?;
    check_symbols(b, m)?;
    match mode {
        SumMode::Direct => {
            let bx: Vec<f64> = b.iter().map(|bj| bj.eval(x)).collect();
            let kernel = |y: &[f64]| k.eval(x, y);
            let g = |y: &[f64]| {
                let mut prod = 1.0;
                let mut diff = 0.0;
                for (i, yi) in y.chunks(n).enumerate() {
                    prod *= f[i].eval(yi);
                    if prod == 0.0 {
                        return 0.0;
                    }
                    diff += bx[i] - b[i].eval(yi);
                }
                prod * diff
            };
            Ok(integrate(&kernel, &g, &diag(x, m), &boxes(f, cfg), cfg))
        }
        SumMode::Iterative => {
            let t = apply_masked(k, f, b, 0, x, cfg);
            Ok((0..m).map(|j| b[j].eval(x) * t - apply_masked(k, f, b, 1 << j, x, cfg)).sum())
        }
    }
}

/// Product-type commutator `[b_1, ..., [b_m, T]_m ...]_1 (f)(x)`.
pub fn eval_product_commutator(
    b: &[SymbolSpec],
    k: &KernelSpec,
    f: &[TestFunction],
    x: &[f64],
    cfg: &QuadratureConfig,
    mode: ProductMode,
) -> Result<f64> {
    cfg.validate()?;
    let (n, m) = shape(x, f, k.alpha)?;
    check_symbols(b, m)?;
    let bx: Vec<f64> = b.iter().map(|bj| bj.eval(x)).collect();
    match mode {
        ProductMode::Direct => {
            let kernel = |y: &[f64]| k.eval(x, y);
            let g = |y: &[f64]| {
                let mut acc = 1.0;
                for (i, yi) in y.chunks(n).enumerate() {
                    acc *= f[i].eval(yi);
                    if acc == 0.0 {
                        return 0.0;
                    }
                    acc *= bx[i] - b[i].eval(yi);
                }
                acc
            };
            Ok(integrate(&kernel, &g, &diag(x, m), &boxes(f, cfg), cfg))
        }
        ProductMode::Expansion => {
            // mask bit i set: slot i carries b_i(y_i); otherwise the factor b_i(x)
            let mut total = 0.0;
            for mask in 0..(1u32 << m) {
                let carried = mask.count_ones();
                let sign = if carried % 2 == 0 { 1.0 } else { -1.0 };
                let outer: f64 = (0..m).filter(|i| mask >> i & 1 == 0).map(|i| bx[i]).product();
                if outer == 0.0 {
                    continue;
                }
                total += sign * outer * apply_masked(k, f, b, mask, x, cfg);
            }
            Ok(total)
        }
        ProductMode::Iterative => Ok(nested(k, f, b, &bx, m, 0, x, cfg)),
    }
}

/// `C_j(mask) = b_j(x) C_{j-1}(mask) - C_{j-1}(mask | j)` unwound from the
/// outermost slot; `C_0(mask) = T` with the slots in `mask` multiplied.
#[allow(clippy::too_many_arguments)]
fn nested(
    k: &KernelSpec,
    f: &[TestFunction],
    b: &[SymbolSpec],
    bx: &[f64],
    level: usize,
    mask: u32,
    x: &[f64],
    cfg: &QuadratureConfig,
) -> f64 {
    if level == 0 {
        return apply_masked(k, f, b, mask, x, cfg);
    }
    let j = level - 1;
    let keep = if bx[j] == 0.0 { 0.0 } else { bx[j] * nested(k, f, b, bx, j, mask, x, cfg) };
    keep - nested(k, f, b, bx, j, mask | 1 << j, x, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(h: f64) -> TestFunction {
        TestFunction::boxed(vec![[0.0, 1.0]], h).unwrap()
    }

    #[test]
    fn linear_fractional_integral_closed_form() {
        // n = m = 1: int_0^1 |x - y|^{a-1} dy = (x^a + (1-x)^a)/a
        let cfg = QuadratureConfig::default();
        for &(x, a) in &[(0.3, 0.5), (0.0, 0.5), (0.7, 0.25), (2.0, 0.5)] {
            let got = eval_i_alpha(&[unit_box(1.0)], a, &[x], &cfg).unwrap();
            let want = if x <= 1.0 {
                (x.powf(a) + (1.0 - x).powf(a)) / a
            } else {
                (x.powf(a) - (x - 1.0f64).powf(a)) / a
            };
            assert!((got - want).abs() < 1e-8 * want.abs(), "x={x} a={a} got={got} want={want}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = vec![TestFunction::boxed(vec![[0.0, 1.0]; 3], 1.0).unwrap(); 2];
        let err = eval_i_alpha(&f, 1.0, &[0.0; 3], &QuadratureConfig::default()).unwrap_err();
        assert_eq!(err, Error::DimensionBudget { nm: 6 });
    }

    #[test]
    fn commutator_modes_agree_bilinear() {
        let cfg = QuadratureConfig::default();
        let k = KernelSpec::standard(1.0);
        let f = [unit_box(1.0), TestFunction::bump(vec![0.4], 0.5, 2.0).unwrap()];
        let b = [SymbolSpec::power(1, 0.3), SymbolSpec::power(1, 0.6)];
        let x = [0.35];
        let d = eval_sum_commutator(&b, &k, &f, &x, &cfg, SumMode::Direct).unwrap();
        let it = eval_sum_commutator(&b, &k, &f, &x, &cfg, SumMode::Iterative).unwrap();
        assert!((d - it).abs() <= 1e-9 * d.abs().max(1e-12));
        let pd = eval_product_commutator(&b, &k, &f, &x, &cfg, ProductMode::Direct).unwrap();
        let pe = eval_product_commutator(&b, &k, &f, &x, &cfg, ProductMode::Expansion).unwrap();
        let pi = eval_product_commutator(&b, &k, &f, &x, &cfg, ProductMode::Iterative).unwrap();
        assert!((pd - pe).abs() <= 1e-9 * pd.abs().max(1e-12), "{pd} {pe}");
        assert!((pd - pi).abs() <= 1e-9 * pd.abs().max(1e-12), "{pd} {pi}");
    }

    #[test]
    fn constant_symbol_kills_commutator() {
        let cfg = QuadratureConfig::default();
        let k = KernelSpec::standard(0.5);
        let f = [unit_box(1.0)];
        let b = [SymbolSpec::constant(3.0)];
        let v = eval_sum_commutator(&b, &k, &f, &[0.5], &cfg, SumMode::Direct).unwrap();
        assert_eq!(v, 0.0);
    }
}
