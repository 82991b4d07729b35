//! Tensor Gauss–Legendre quadrature over a product of support boxes with
//! dyadic shells converging on the diagonal point `(x, ..., x)`.
//!
//! Shell `k` is the cube of half-side `L 2^{-k}` about the centre minus the
//! cube of half-side `L 2^{-k-1}`, split into `4^d - 2^d` congruent
//! subcubes. After `depth` shells the innermost cube is extrapolated as
//! `g(c) K_{last} q / (1 - q)`, where `q` is the ratio of the last two
//! kernel-only shell integrals. That remainder is linear in `g`, so every
//! algebraic rearrangement of an integrand is integrated identically.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::{gauss_legendre, usable_levels};

/// Shells stop once their half-side drops below this multiple of `|c|`.
const DEPTH_RESOLUTION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Subdivisions per axis of every shell subcube.
    #[serde(default = "default_base")]
    pub base_cells: usize,
    /// Extra subdivisions per axis on the outermost shell, halved on each
    /// shell inward; resolves inputs that vary on the scale of their support.
    #[serde(default = "default_outer")]
    pub outer_cells: usize,
    /// Number of dyadic shells about the diagonal point.
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Gauss–Legendre points per axis; `None` picks 8 for `d <= 2`, else 4.
    #[serde(default)]
    pub order: Option<usize>,
    /// Optional box intersected with every support, `[lo, hi]` per coordinate
    /// of `R^n`.
    #[serde(default)]
    pub truncation: Option<Vec<[f64; 2]>>,
    /// Relative tolerance used by the pointwise checks.
    #[serde(default = "default_tol")]
    pub tolerance: f64,
}

fn default_base() -> usize {
    1
}
fn default_outer() -> usize {
    8
}
fn default_depth() -> usize {
    36
}
fn default_tol() -> f64 {
    1e-6
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { base_cells: 1, outer_cells: 8, depth: 36, order: None, truncation: None, tolerance: 1e-6 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.base_cells == 0 {
            return domain("base_cells must be at least 1");
        }
        if !(self.tolerance > 0.0) {
            return domain("tolerance must be positive");
        }
        if self.order == Some(0) {
            return domain("quadrature order must be at least 1");
        }
        Ok(())
    }

    fn order_for(&self, d: usize) -> usize {
        self.order.unwrap_or(if d <= 2 { 8 } else { 4 })
    }
}

/// Integrate `K(y) * g(y)` over `boxes` (one `[lo, hi]` per coordinate of
/// `R^{mn}`), refining toward `diag`, the point `(x, ..., x)`.
pub(crate) fn integrate(
    kernel: &dyn Fn(&[f64]) -> f64,
    g: &dyn Fn(&[f64]) -> f64,
    diag: &[f64],
    boxes: &[[f64; 2]],
    cfg: &QuadratureConfig,
) -> f64 {
    let d = boxes.len();
    if boxes.iter().any(|[a, b]| !(b > a)) {
        return 0.0;
    }
    let center: Vec<f64> = diag.iter().zip(boxes).map(|(x, [a, b])| x.clamp(*a, *b)).collect();
    let half = center
        .iter()
        .zip(boxes)
        .map(|(c, [a, b])| (c - a).max(b - c))
        .fold(0.0, f64::max);
    let order = cfg.order_for(d);
    let rule = gauss_legendre(order);

    let mut y = vec![0.0; d];
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    let mut kshell_prev = 0.0;
    let mut kshell_last = 0.0;
    // distances below this lose relative precision against |c|
    let anchor = center.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    let depth = usable_levels(half, anchor, DEPTH_RESOLUTION, cfg.depth);
    for level in 0..depth {
        let s = half * 0.5f64.powi(level as i32);
        let cells = cfg.base_cells.max(cfg.outer_cells >> level.min(63));
        let q = 0.5 * s;
        let mut kshell = 0.0;
        let mut gshell = 0.0;
        // subcubes: offsets j in {0,1,2,3}^d, skipping the inner {1,2}^d
        let count = 4usize.pow(d as u32);
        for code in 0..count {
            let mut rest = code;
            let mut inner = true;
            for slot in idx.iter_mut() {
                *slot = rest % 4;
                rest /= 4;
                inner &= *slot == 1 || *slot == 2;
            }
            if inner {
                continue;
            }
            let mut lo = [0.0f64; 8];
            let mut hi = [0.0f64; 8];
            let mut empty = false;
            for a in 0..d {
                let l = center[a] + (idx[a] as f64 - 2.0) * q;
                let h = l + q;
                lo[a] = l.max(boxes[a][0]);
                hi[a] = h.min(boxes[a][1]);
                empty |= !(hi[a] > lo[a]);
            }
            if empty {
                continue;
            }
            let (k, kg) = cube_rule(kernel, g, &lo[..d], &hi[..d], cells, rule, &mut y);
            kshell += k;
            gshell += kg;
        }
        total += gshell;
        kshell_prev = kshell_last;
        kshell_last = kshell;
    }
    // innermost cube, extrapolated from the kernel-only shell ratio
    if kshell_prev > 0.0 && kshell_last > 0.0 || kshell_prev < 0.0 && kshell_last < 0.0 {
        let ratio = kshell_last / kshell_prev;
        if ratio < 1.0 {
            total += g(&center) * kshell_last * ratio / (1.0 - ratio);
        }
    }
    total
}

/// Tensor rule over the box `[lo, hi]` split into `cells^d` pieces.
/// Returns `(sum w K, sum w K g)`.
fn cube_rule(
    kernel: &dyn Fn(&[f64]) -> f64,
    g: &dyn Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    cells: usize,
    rule: &crate::numeric::Rule,
    y: &mut [f64],
) -> (f64, f64) {
    let d = lo.len();
    let q = rule.nodes.len();
    let widths: Vec<f64> = (0..d).map(|a| (hi[a] - lo[a]) / cells as f64).collect();
    let jac: f64 = widths.iter().map(|w| 0.5 * w).product();
    let per_cell = q.pow(d as u32);
    let cell_count = cells.pow(d as u32);
    let mut ks = 0.0;
    let mut kgs = 0.0;
    for cell in 0..cell_count {
        let mut crest = cell;
        let mut base = [0.0f64; 8];
        for a in 0..d {
            base[a] = lo[a] + (crest % cells) as f64 * widths[a];
            crest /= cells;
        }
        for node in 0..per_cell {
            let mut rest = node;
            let mut w = jac;
            for a in 0..d {
                let t = rest % q;
                rest /= q;
                y[a] = base[a] + 0.5 * widths[a] * (1.0 + rule.nodes[t]);
                w *= rule.weights[t];
            }
            let k = kernel(y);
            if k == 0.0 {
                continue;
            }
            ks += w * k;
            let gv = g(y);
            if gv != 0.0 {
                kgs += w * k * gv;
            }
        }
    }
    (ks, kgs)
}
