//! Multilinear fractional integrals, kernel operators and their
//! commutators with Lipschitz symbols, evaluated by singular quadrature.

mod checks;
mod engine;
mod evaluate;

pub use checks::{
    difference_of_products, kernel_condition_check, pointwise_domination_check, symbol_constant_estimate,
    DominationReport, DominationRow, KernelReport, KernelWitness, ProductIdentity, SymbolReport, DECLARED_SLACK,
};
pub use engine::QuadratureConfig;
pub use evaluate::{
    eval_i_alpha, eval_product_commutator, eval_sum_commutator, eval_t_alpha, ProductMode, SumMode,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{dist, norm};

/// Kernel `K(x, y_1, ..., y_m)` of order `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub alpha: f64,
    #[serde(default = "one")]
    pub gamma: f64,
    pub form: KernelForm,
    /// Declared constant of the size condition.
    #[serde(default = "one")]
    pub c_size: f64,
    /// Declared constant of the smoothness condition, if any.
    #[serde(default)]
    pub c_smooth: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelForm {
    /// `(sum |x - y_i|)^{alpha - mn}`.
    Standard,
    /// Standard kernel times `sin(x_1)`.
    Modulated,
    /// Standard kernel times `|x - y_1|^{-n/2}`; breaks the size condition.
    SizeViolating,
    /// Standard kernel times a constant.
    Scaled { factor: f64 },
}

impl KernelSpec {
    /// Standard kernel of order `alpha` with `gamma = 1`.
    pub fn standard(alpha: f64) -> KernelSpec {
        KernelSpec { alpha, gamma: 1.0, form: KernelForm::Standard, c_size: 1.0, c_smooth: None }
    }

    pub fn with_form(alpha: f64, form: KernelForm) -> KernelSpec {
        let c_size = match &form {
            KernelForm::Scaled { factor } => factor.abs(),
            _ => 1.0,
        };
        KernelSpec { alpha, gamma: 1.0, form, c_size, c_smooth: None }
    }

    pub fn is_standard(&self) -> bool {
        matches!(self.form, KernelForm::Standard) || matches!(self.form, KernelForm::Scaled { factor } if factor == 1.0)
    }

    /// `K(x, y)` with `y` the concatenation of `m` points of `R^n`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let m = y.len() / n;
        let sum: f64 = y.chunks(n).map(|yi| dist(x, yi)).sum();
        let base = sum.powf(self.alpha - (m * n) as f64);
        match &self.form {
            KernelForm::Standard => base,
            KernelForm::Modulated => base * x[0].sin(),
            KernelForm::SizeViolating => base * dist(x, &y[..n]).powf(-(n as f64) / 2.0),
            KernelForm::Scaled { factor } => base * factor,
        }
    }

    /// Smoothness constant of the standard kernel with `gamma = 1` on the
    /// region `sum |x - y_i| > 2m |x - x'|`: `|alpha - mn| m 2^{1 - alpha + mn}`.
    pub fn standard_smoothness_constant(alpha: f64, n: usize, m: usize) -> f64 {
        let b = alpha - (m * n) as f64;
        b.abs() * m as f64 * 2f64.powf(1.0 - b)
    }
}

/// Lipschitz symbol `b : R^n -> R` of exponent `delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub form: SymbolForm,
    pub delta: f64,
    /// Declared Lipschitz constant on the working domain.
    #[serde(default = "one")]
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolForm {
    /// `coef * |x - center|^delta`.
    Power { center: Vec<f64>, coef: f64 },
    /// `sum_k coefs[k] * x_1^k`.
    Polynomial { coefs: Vec<f64> },
    /// `height * exp(-1 / (1 - |x - center|^2 / radius^2))` inside the ball.
    Bump { center: Vec<f64>, radius: f64, height: f64 },
    Constant { value: f64 },
}

impl SymbolSpec {
    /// `|x|^delta` with constant 1.
    pub fn power(n: usize, delta: f64) -> SymbolSpec {
        SymbolSpec { form: SymbolForm::Power { center: vec![0.0; n], coef: 1.0 }, delta, constant: 1.0 }
    }

    pub fn constant(value: f64) -> SymbolSpec {
        SymbolSpec { form: SymbolForm::Constant { value }, delta: 0.5, constant: 0.0 }
    }

    pub fn is_constant(&self) -> bool {
        match &self.form {
            SymbolForm::Constant { .. } => true,
            SymbolForm::Power { coef, .. } => *coef == 0.0,
            SymbolForm::Polynomial { coefs } => coefs.iter().skip(1).all(|c| *c == 0.0),
            SymbolForm::Bump { height, .. } => *height == 0.0,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.form {
            SymbolForm::Power { center, coef } => coef * dist(x, center).powf(self.delta),
            SymbolForm::Polynomial { coefs } => coefs.iter().rev().fold(0.0, |acc, c| acc * x[0] + c),
            SymbolForm::Bump { center, radius, height } => bump(dist(x, center) / radius) * height,
            SymbolForm::Constant { value } => *value,
        }
    }
}

fn bump(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// Compactly supported input function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    pub form: TestForm,
    /// Support box, one `[lo, hi]` per coordinate.
    pub support: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestForm {
    /// `height` on the support box.
    Box { height: f64 },
    /// `height * exp(-1 / (1 - |x - center|^2 / radius^2))`; the support box
    /// is the bounding box of the ball.
    Bump { center: Vec<f64>, radius: f64, height: f64 },
}

impl TestFunction {
    /// `height * chi_box`.
    pub fn boxed(support: Vec<[f64; 2]>, height: f64) -> Result<TestFunction> {
        if support.is_empty() || support.iter().any(|[a, b]| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return domain("support box needs finite lo < hi on every axis");
        }
        Ok(TestFunction { form: TestForm::Box { height }, support })
    }

    pub fn bump(center: Vec<f64>, radius: f64, height: f64) -> Result<TestFunction> {
        if !(radius > 0.0) || center.is_empty() {
            return domain("bump needs a positive radius and a center");
        }
        let support = center.iter().map(|c| [c - radius, c + radius]).collect();
        Ok(TestFunction { form: TestForm::Bump { center, radius, height }, support })
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        if y.iter().zip(&self.support).any(|(v, [a, b])| v < a || v > b) {
            return 0.0;
        }
        match &self.form {
            TestForm::Box { height } => *height,
            TestForm::Bump { center, radius, height } => bump(dist(y, center) / radius) * height,
        }
    }

    /// The same function multiplied by `k`.
    pub fn scaled(&self, k: f64) -> TestFunction {
        let form = match &self.form {
            TestForm::Box { height } => TestForm::Box { height: height * k },
            TestForm::Bump { center, radius, height } => {
                TestForm::Bump { center: center.clone(), radius: *radius, height: height * k }
            }
        };
        TestFunction { form, support: self.support.clone() }
    }

    /// `x -> f(x / s)` for `s > 0`.
    pub fn dilated(&self, s: f64) -> TestFunction {
        let form = match &self.form {
            TestForm::Box { height } => TestForm::Box { height: *height },
            TestForm::Bump { center, radius, height } => {
                TestForm::Bump { center: center.iter().map(|c| c * s).collect(), radius: radius * s, height: *height }
            }
        };
        TestFunction { form, support: self.support.iter().map(|[a, b]| [a * s, b * s]).collect() }
    }

    /// `|f|`.
    pub fn abs(&self) -> TestFunction {
        let h = match &self.form {
            TestForm::Box { height } | TestForm::Bump { height, .. } => *height,
        };
        if h < 0.0 {
            self.scaled(-1.0)
        } else {
            self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.form, TestForm::Box { height } | TestForm::Bump { height, .. } if *height == 0.0)
    }

    /// Radius of a ball about the origin containing the support.
    pub fn support_radius(&self) -> f64 {
        let far: Vec<f64> = self.support.iter().map(|[a, b]| a.abs().max(b.abs())).collect();
        norm(&far)
    }
}
