//! Exponent arithmetic, theorem admissibility and the classification of
//! `(1/p, delta_tilde)` into trivial and nontrivial regions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::linspace;

/// Half-width of the band around a case boundary that counts as a tie.
pub const TIE_EPS: f64 = 1e-12;

/// Hölder conjugate `p'` with `1/p + 1/p' = 1`; `1 -> inf`, `inf -> 1`.
pub fn holder_conjugate(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return domain(format!("conjugate exponent needs p >= 1, got {p}"));
    }
    Ok(if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    })
}

/// `1/p` with `1/inf = 0` exactly.
pub fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// The m-tuple `(p_1, ..., p_m)`, entries in `[1, inf]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExponentVector {
    entries: Vec<f64>,
}

impl TryFrom<Vec<f64>> for ExponentVector {
    type Error = crate::Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ExponentVector::new(v)
    }
}

impl From<ExponentVector> for Vec<f64> {
    fn from(p: ExponentVector) -> Vec<f64> {
        p.entries
    }
}

impl ExponentVector {
    pub fn new(entries: Vec<f64>) -> Result<ExponentVector> {
        if entries.is_empty() {
            return domain("exponent vector must have at least one entry");
        }
        for (i, &p) in entries.iter().enumerate() {
            if !(p >= 1.0) {
                return domain(format!("exponent p_{} = {p} is below 1", i + 1));
            }
        }
        Ok(ExponentVector { entries })
    }

    /// `m` copies of the exponent whose reciprocal is `inv_p / m`.
    pub fn uniform(m: usize, inv_p: f64) -> Result<ExponentVector> {
        if m == 0 || !(0.0..=m as f64).contains(&inv_p) {
            return domain(format!("aggregate 1/p = {inv_p} outside [0, {m}]"));
        }
        let each = inv_p / m as f64;
        let p = if each == 0.0 { f64::INFINITY } else { (1.0 / each).max(1.0) };
        ExponentVector::new(vec![p; m])
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries[i]
    }

    /// `1/p_i`.
    pub fn inv(&self, i: usize) -> f64 {
        recip(self.entries[i])
    }

    /// Aggregate `1/p = sum 1/p_i`.
    pub fn inv_aggregate(&self) -> f64 {
        (0..self.m()).map(|i| self.inv(i)).sum()
    }

    /// Aggregate `p`, infinite when every entry is infinite.
    pub fn aggregate(&self) -> f64 {
        recip(self.inv_aggregate())
    }

    /// `p_i'`.
    pub fn conjugate(&self, i: usize) -> f64 {
        holder_conjugate(self.entries[i]).expect("entries validated at construction")
    }

    /// Indices with `p_i = 1` (zero-based).
    pub fn ones(&self) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.entries[i] == 1.0).collect()
    }

    /// Indices with `p_i > 1` (zero-based).
    pub fn above_one(&self) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.entries[i] > 1.0).collect()
    }

    pub fn is_one(&self, i: usize) -> bool {
        self.entries[i] == 1.0
    }
}

/// `(n, m, beta, delta, delta_tilde, gamma)`. The per-slot order is fixed at
/// `beta / m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterPoint {
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    pub delta: f64,
    pub delta_tilde: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn default_gamma() -> f64 {
    1.0
}

impl ParameterPoint {
    pub fn new(n: usize, m: usize, beta: f64, delta: f64, delta_tilde: f64, gamma: f64) -> Result<ParameterPoint> {
        let pt = ParameterPoint { n, m, beta, delta, delta_tilde, gamma };
        pt.validate()?;
        Ok(pt)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return domain("n and m must be positive");
        }
        let mn = (self.m * self.n) as f64;
        if !(self.beta > 0.0 && self.beta < mn) {
            return domain(format!("beta = {} outside (0, mn) = (0, {mn})", self.beta));
        }
        if !(self.delta.is_finite() && self.delta_tilde.is_finite()) {
            return domain("delta and delta_tilde must be finite");
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return domain(format!("gamma = {} outside (0, 1]", self.gamma));
        }
        Ok(())
    }

    pub fn with_delta_tilde(&self, delta_tilde: f64) -> ParameterPoint {
        ParameterPoint { delta_tilde, ..*self }
    }

    pub fn mn(&self) -> f64 {
        (self.m * self.n) as f64
    }

    /// `(beta - mn)(1 - 1/m) + delta/m`.
    pub fn tau(&self) -> f64 {
        let m = self.m as f64;
        (self.beta - self.mn()) * (1.0 - 1.0 / m) + self.delta / m
    }

    /// `beta - mn`, the lower edge of the nontrivial wedge.
    pub fn lower_edge(&self) -> f64 {
        self.beta - self.mn()
    }

    /// `n - beta/m + delta/m`, the decay exponent of the tail factors.
    pub fn tail_decay(&self) -> f64 {
        let m = self.m as f64;
        self.n as f64 - self.beta / m + self.delta / m
    }

    /// The symbol space `Lambda(delta)` needs `0 < delta < 1`.
    pub fn symbol_space_defined(&self) -> bool {
        self.delta > 0.0 && self.delta < 1.0
    }
}

/// `beta - n/p`.
pub fn natural_delta(beta: f64, n: usize, p: &ExponentVector) -> f64 {
    beta - n as f64 * p.inv_aggregate()
}

/// `tau` for a point (free-function form).
pub fn tau(point: &ParameterPoint) -> f64 {
    point.tau()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutatorVariant {
    Sum,
    Product,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub alpha_tilde: f64,
    /// Human-readable statements of every violated hypothesis.
    pub violations: Vec<String>,
}

/// Hypotheses of the boundedness theorems for the sum (`alpha_tilde =
/// alpha + delta`) and product (`alpha_tilde = alpha + m delta`) commutators.
pub fn admissible_theorem(point: &ParameterPoint, p: &ExponentVector, alpha: f64, variant: CommutatorVariant) -> Result<Admissibility> {
    let mn = point.mn();
    if !(alpha > 0.0 && alpha < mn) {
        return domain(format!("alpha = {alpha} outside (0, mn) = (0, {mn})"));
    }
    let m = point.m as f64;
    let (cap, alpha_tilde, cap_label) = match variant {
        CommutatorVariant::Sum => (mn - alpha, alpha + point.delta, "mn - alpha"),
        CommutatorVariant::Product => ((mn - alpha) / m, alpha + m * point.delta, "(mn - alpha)/m"),
    };
    let mut violations = Vec::new();
    if !(point.delta > 0.0) {
        violations.push(format!("delta = {} must be positive", point.delta));
    }
    if !(point.delta < point.gamma) {
        violations.push(format!("delta = {} must be below gamma = {}", point.delta, point.gamma));
    }
    if !(point.delta < cap) {
        violations.push(format!("delta = {} must be below {cap_label} = {cap}", point.delta));
    }
    let inv_p = p.inv_aggregate();
    if !(inv_p < alpha_tilde / point.n as f64) {
        violations.push(format!("p = {} must exceed n/alpha_tilde = {}", p.aggregate(), point.n as f64 / alpha_tilde));
    }
    Ok(Admissibility { admissible: violations.is_empty(), alpha_tilde, violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NontrivialCase {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl NontrivialCase {
    pub fn letter(self) -> char {
        match self {
            NontrivialCase::A => 'a',
            NontrivialCase::B => 'b',
            NontrivialCase::C => 'c',
            NontrivialCase::D => 'd',
            NontrivialCase::E => 'e',
            NontrivialCase::F => 'f',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionClass {
    /// `delta_tilde > delta` or `delta_tilde > beta - n/p`.
    TrivialWeightsA,
    /// `delta_tilde = beta - n/p = delta`.
    TrivialWeightsB,
    /// `delta_tilde < beta - mn`.
    TrivialOrZeroC,
    Nontrivial(NontrivialCase),
    /// A tie inside the wedge not covered by any construction case.
    ExcludedBoundary,
}

impl RegionClass {
    pub fn tag(&self) -> String {
        match self {
            RegionClass::TrivialWeightsA => "TrivialWeights_a".into(),
            RegionClass::TrivialWeightsB => "TrivialWeights_b".into(),
            RegionClass::TrivialOrZeroC => "TrivialOrZero_c".into(),
            RegionClass::Nontrivial(c) => format!("Nontrivial_{}", c.letter()),
            RegionClass::ExcludedBoundary => "ExcludedBoundary".into(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, RegionClass::TrivialWeightsA | RegionClass::TrivialWeightsB | RegionClass::TrivialOrZeroC)
    }

    pub fn case(&self) -> Option<NontrivialCase> {
        match self {
            RegionClass::Nontrivial(c) => Some(*c),
            _ => None,
        }
    }

    /// One-line reason suitable for diagnostics.
    pub fn explanation(&self) -> &'static str {
        match self {
            RegionClass::TrivialWeightsA => {
                "triviality item (a): delta_tilde > delta or delta_tilde > beta - n/p, the class holds only if some v_i is infinite a.e."
            }
            RegionClass::TrivialWeightsB => {
                "triviality item (b): delta_tilde = beta - n/p = delta, the class holds only if some v_i is infinite a.e."
            }
            RegionClass::TrivialOrZeroC => {
                "triviality item (c): delta_tilde < beta - mn, the class holds only if some v_i is infinite a.e. or w = 0 a.e."
            }
            RegionClass::Nontrivial(_) => "nontrivial weights exist",
            RegionClass::ExcludedBoundary => "tie inside the nontrivial wedge not covered by any construction case",
        }
    }
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_EPS
}

/// Classify a point with the given exponent vector.
pub fn classify_region(point: &ParameterPoint, p: &ExponentVector) -> RegionClass {
    classify_inv(point, p.inv_aggregate())
}

/// Classification depends on `p` only through the aggregate `1/p`.
pub fn classify_inv(point: &ParameterPoint, inv_p: f64) -> RegionClass {
    let dt = point.delta_tilde;
    let delta = point.delta;
    let upper = point.beta - point.n as f64 * inv_p;
    let lower = point.lower_edge();
    let tau = point.tau();

    if dt > delta + TIE_EPS || dt > upper + TIE_EPS {
        return RegionClass::TrivialWeightsA;
    }
    if dt < lower - TIE_EPS {
        return RegionClass::TrivialOrZeroC;
    }
    if near(dt, delta) && near(dt, upper) {
        return RegionClass::TrivialWeightsB;
    }
    if near(dt, lower) {
        return RegionClass::Nontrivial(NontrivialCase::F);
    }
    if dt < tau - TIE_EPS {
        // tau <= upper, with ties on tau = upper counted here
        return if tau <= upper + TIE_EPS {
            RegionClass::Nontrivial(NontrivialCase::A)
        } else {
            RegionClass::Nontrivial(NontrivialCase::B)
        };
    }
    if near(dt, tau) {
        if tau < delta - TIE_EPS && delta < upper - TIE_EPS {
            return RegionClass::Nontrivial(NontrivialCase::C);
        }
        if tau < upper - TIE_EPS && upper < delta - TIE_EPS {
            return RegionClass::Nontrivial(NontrivialCase::D);
        }
        return RegionClass::ExcludedBoundary;
    }
    RegionClass::Nontrivial(NontrivialCase::E)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Panel {
    BetaGt,
    BetaEq,
    BetaLt,
}

impl Panel {
    pub const ALL: [Panel; 3] = [Panel::BetaGt, Panel::BetaEq, Panel::BetaLt];

    pub fn name(self) -> &'static str {
        match self {
            Panel::BetaGt => "beta_gt",
            Panel::BetaEq => "beta_eq",
            Panel::BetaLt => "beta_lt",
        }
    }

    pub fn parse(s: &str) -> Result<Panel> {
        match s {
            "beta_gt" => Ok(Panel::BetaGt),
            "beta_eq" => Ok(Panel::BetaEq),
            "beta_lt" => Ok(Panel::BetaLt),
            _ => domain(format!("unknown panel '{s}', expected beta_gt, beta_eq or beta_lt")),
        }
    }

    /// Representative point: `n = 1`, `m = 2`, `delta = 0.3`, with beta above,
    /// equal to, or below delta.
    pub fn representative(self) -> ParameterPoint {
        let beta = match self {
            Panel::BetaGt => 0.9,
            Panel::BetaEq => 0.3,
            Panel::BetaLt => 0.2,
        };
        ParameterPoint::new(1, 2, beta, 0.3, 0.0, 1.0).expect("panel point")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCell {
    pub inv_p: f64,
    pub delta_tilde: f64,
    pub class: RegionClass,
    /// Dashed line `tau` (independent of `1/p`).
    pub tau: f64,
    /// `beta - n/p` at this column.
    pub natural_edge: f64,
    /// Cell sits on the closed wedge boundary.
    pub on_edge: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionGrid {
    pub panel: Panel,
    pub point: ParameterPoint,
    pub resolution: usize,
    pub cells: Vec<RegionCell>,
}

/// Grid nodes along `delta_tilde`. For `resolution >= 4` the spacing makes
/// both `beta - mn` and `delta` exact nodes with one step of margin.
pub fn delta_tilde_nodes(lower: f64, delta: f64, resolution: usize) -> Vec<f64> {
    if resolution >= 4 {
        let h = (delta - lower) / (resolution - 3) as f64;
        (0..resolution).map(|k| lower + (k as f64 - 1.0) * h).collect()
    } else {
        let g = (delta - lower) / 4.0;
        linspace(lower - g, delta + g, resolution)
    }
}

pub fn region_grid(panel: Panel, resolution: usize) -> Result<RegionGrid> {
    if resolution < 2 {
        return domain(format!("resolution must be at least 2, got {resolution}"));
    }
    let base = panel.representative();
    let inv_nodes = linspace(0.0, base.m as f64, resolution);
    let dt_nodes = delta_tilde_nodes(base.lower_edge(), base.delta, resolution);
    let mut cells = Vec::with_capacity(resolution * resolution);
    for &inv_p in &inv_nodes {
        for &dt in &dt_nodes {
            let pt = base.with_delta_tilde(dt);
            let upper = pt.beta - pt.n as f64 * inv_p;
            let inside = dt >= pt.lower_edge() - TIE_EPS && dt <= pt.delta.min(upper) + TIE_EPS;
            let on_edge = inside && (near(dt, pt.lower_edge()) || near(dt, upper) || near(dt, pt.delta));
            cells.push(RegionCell {
                inv_p,
                delta_tilde: dt,
                class: classify_inv(&pt, inv_p),
                tau: pt.tau(),
                natural_edge: upper,
                on_edge,
            });
        }
    }
    Ok(RegionGrid { panel, point: base, resolution, cells })
}

impl RegionGrid {
    /// CSV body (header plus one row per cell), floats with 17 significant
    /// digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("panel,inv_p,delta_tilde,tag,tau,natural_edge,on_edge\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.panel.name(),
                fmt17(c.inv_p),
                fmt17(c.delta_tilde),
                c.class.tag(),
                fmt17(c.tau),
                fmt17(c.natural_edge),
                c.on_edge
            ));
        }
        out
    }
}

/// Float formatted with 17 significant digits, `inf`/`-inf`/`nan` spelled out.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: usize, m: usize, beta: f64, delta: f64, dt: f64) -> ParameterPoint {
        ParameterPoint::new(n, m, beta, delta, dt, 1.0).unwrap()
    }

    fn pv(v: &[f64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conjugates() {
        assert_eq!(holder_conjugate(2.0).unwrap(), 2.0);
        assert_eq!(holder_conjugate(1.0).unwrap(), f64::INFINITY);
        assert_eq!(holder_conjugate(f64::INFINITY).unwrap(), 1.0);
        assert!((holder_conjugate(4.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!(holder_conjugate(0.5).is_err());
        assert!(holder_conjugate(f64::NAN).is_err());
    }

    #[test]
    fn tau_values() {
        assert!((pt(1, 2, 1.1, 0.3, 0.0).tau() + 0.3).abs() < 1e-15);
        assert!((pt(1, 1, 0.5, 0.3, 0.0).tau() - 0.3).abs() < 1e-15);
        assert!((pt(1, 2, 0.9, 0.3, 0.0).tau() + 0.4).abs() < 1e-15);
    }

    #[test]
    fn natural_delta_values() {
        assert!((natural_delta(0.8, 1, &pv(&[4.0, 4.0])) - 0.3).abs() < 1e-15);
        assert!((natural_delta(1.1, 1, &pv(&[2.0, 2.0])) - 0.1).abs() < 1e-15);
        assert!((natural_delta(0.5, 1, &pv(&[1.0, 1.0])) + 1.5).abs() < 1e-15);
    }

    #[test]
    fn exponent_vector_sets() {
        let p = pv(&[1.0, f64::INFINITY, 3.0]);
        assert_eq!(p.ones(), vec![0]);
        assert_eq!(p.above_one(), vec![1, 2]);
        assert!((p.inv_aggregate() - (1.0 + 1.0 / 3.0)).abs() < 1e-15);
        assert!(ExponentVector::new(vec![0.9]).is_err());
        assert_eq!(pv(&[f64::INFINITY, f64::INFINITY]).aggregate(), f64::INFINITY);
    }

    #[test]
    fn admissibility_examples() {
        let a = admissible_theorem(&pt(1, 2, 1.0, 0.3, 0.0), &pv(&[2.0, 2.0]), 0.8, CommutatorVariant::Sum).unwrap();
        assert!(a.admissible);
        assert!((a.alpha_tilde - 1.1).abs() < 1e-15);
        let bad = ParameterPoint::new(1, 2, 1.0, 0.7, 0.0, 0.5).unwrap();
        let a = admissible_theorem(&bad, &pv(&[2.0, 2.0]), 0.8, CommutatorVariant::Sum).unwrap();
        assert!(!a.admissible);
        assert!(a.violations.iter().any(|v| v.contains("gamma")));
        let a = admissible_theorem(&pt(1, 2, 1.0, 0.3, 0.0), &pv(&[2.0, 2.0]), 0.8, CommutatorVariant::Product).unwrap();
        assert!(a.admissible);
        assert!((a.alpha_tilde - 1.4).abs() < 1e-15);
        assert!(admissible_theorem(&pt(1, 2, 1.0, 0.3, 0.0), &pv(&[2.0, 2.0]), 2.0, CommutatorVariant::Sum).is_err());
    }

    #[test]
    fn classify_examples() {
        let p = pv(&[2.0, 2.0]);
        assert_eq!(classify_region(&pt(1, 2, 0.9, 0.3, 0.5), &p), RegionClass::TrivialWeightsA);
        assert_eq!(classify_region(&pt(1, 2, 0.9, 0.3, -1.5), &p), RegionClass::TrivialOrZeroC);
        assert_eq!(classify_region(&pt(1, 2, 0.9, 0.3, -0.2), &p), RegionClass::Nontrivial(NontrivialCase::E));
        assert_eq!(classify_region(&pt(1, 2, 1.0, 0.3, -0.6), &pv(&[1.0, 2.0])), RegionClass::Nontrivial(NontrivialCase::B));
        assert_eq!(classify_region(&pt(1, 2, 1.5, 0.3, -0.3), &p), RegionClass::Nontrivial(NontrivialCase::A));
        assert_eq!(classify_region(&pt(1, 2, 1.5, 0.3, -0.1), &pv(&[4.0, 4.0])), RegionClass::Nontrivial(NontrivialCase::C));
        assert_eq!(classify_region(&pt(1, 2, 0.9, 0.3, -0.4), &p), RegionClass::Nontrivial(NontrivialCase::D));
        assert_eq!(classify_region(&pt(1, 2, 1.0, 0.3, -1.0), &pv(&[1.0, 2.0])), RegionClass::Nontrivial(NontrivialCase::F));
        // delta_tilde = beta - n/p = delta
        assert_eq!(classify_region(&pt(1, 2, 0.8, 0.3, 0.3), &pv(&[4.0, 4.0])), RegionClass::TrivialWeightsB);
        // m = 1 collapses tau onto delta; the tie delta_tilde = tau = delta < beta - n/p is uncovered
        assert_eq!(classify_region(&pt(1, 1, 0.9, 0.3, 0.3), &pv(&[2.0])), RegionClass::ExcludedBoundary);
    }

    #[test]
    fn grid_resolution_four_has_vertex() {
        let g = region_grid(Panel::BetaGt, 4).unwrap();
        assert_eq!(g.cells.len(), 16);
        let pt = g.point;
        let vertex = g
            .cells
            .iter()
            .find(|c| c.inv_p == 2.0 && (c.delta_tilde - pt.lower_edge()).abs() < 1e-15)
            .expect("vertex cell present");
        assert_eq!(vertex.class, RegionClass::Nontrivial(NontrivialCase::F));
        assert!(vertex.on_edge);
    }

    #[test]
    fn grid_beta_eq_apex_is_excluded() {
        let g = region_grid(Panel::BetaEq, 64).unwrap();
        let apex = g.cells.iter().find(|c| c.inv_p == 0.0 && (c.delta_tilde - 0.3).abs() < 1e-15).unwrap();
        assert_eq!(apex.class, RegionClass::TrivialWeightsB);
    }

    #[test]
    fn grid_beta_lt_apex_below_delta() {
        let g = region_grid(Panel::BetaLt, 64).unwrap();
        let top = g
            .cells
            .iter()
            .filter(|c| c.inv_p == 0.0 && !c.class.is_trivial())
            .map(|c| c.delta_tilde)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(top < 0.3 && top <= 0.2 + 1e-12, "apex {top}");
    }

    #[test]
    fn grid_rejects_tiny_resolution() {
        assert!(region_grid(Panel::BetaGt, 1).is_err());
        assert_eq!(region_grid(Panel::BetaGt, 2).unwrap().cells.len(), 4);
        assert!(Panel::parse("beta_ne").is_err());
    }

    #[test]
    fn symbol_space_flag() {
        assert!(pt(1, 2, 0.9, 0.3, 0.0).symbol_space_defined());
        assert!(!pt(1, 2, 0.9, 1.3, 0.0).symbol_space_defined());
    }
}
