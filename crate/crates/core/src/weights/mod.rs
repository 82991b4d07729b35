//! Weights, ball statistics, the per-ball class quantities and the explicit
//! constructions of nontrivial weight pairs.
//!
//! Every weight is radial, so all statistics reduce to one-dimensional
//! integrals in `|x|`.

mod classes;
mod construct;
mod profile;
mod stats;
mod sweep;

pub use classes::{
    a_p_quantity, a_pq_quantity, apq_to_ap_transform, doubling_quantity, hm_full_quantity, hm_global_quantity,
    hm_local_quantity, hm_sigma_quantity, rh_quantity, sigma_domination_constant, ApTransform, SigmaPattern,
};
pub use construct::{construct_weights, CaseDBranch, ConstructionRecipe};
pub use profile::Radial;
pub use stats::{
    ball_integral, ball_power_average, ball_sup_norm, full_space_integral, full_space_sup, outside_integral,
    outside_sup, RadialSupport,
};
pub use sweep::{empirical_class_sup, SweepResult, SweepRow};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A radial weight on `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    /// `|x|^exponent`.
    Power { exponent: f64 },
    /// `(1 + |x|^rho)^(-multiplicity)`.
    ShiftedPowerInverse { rho: f64, multiplicity: f64 },
    /// `e^{|x|}`.
    Exponential,
    /// Piecewise constant in `|x|`: `values[k]` on `edges[k] <= |x| <
    /// edges[k+1]`, the last value extending to infinity. `edges[0] = 0`.
    Tabulated { edges: Vec<f64>, values: Vec<f64> },
    Constant { value: f64 },
    /// `prod_k factors[k].weight ^ factors[k].power`.
    Composite { factors: Vec<Factor> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub weight: WeightSpec,
    pub power: f64,
}

impl WeightSpec {
    pub fn power(exponent: f64) -> WeightSpec {
        WeightSpec::Power { exponent }
    }

    pub fn constant(value: f64) -> WeightSpec {
        WeightSpec::Constant { value }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSpec::Power { exponent } if !exponent.is_finite() => domain("power exponent must be finite"),
            WeightSpec::ShiftedPowerInverse { rho, multiplicity } if !(*rho > 0.0 && multiplicity.is_finite()) => {
                domain("shifted power needs rho > 0 and a finite multiplicity")
            }
            WeightSpec::Tabulated { edges, values } => {
                if edges.is_empty() || edges.len() != values.len() {
                    return domain("tabulated weight needs matching, nonempty edges and values");
                }
                if edges[0] != 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
                    return domain("tabulated edges must start at 0 and increase strictly");
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return domain("tabulated values must be finite and nonnegative");
                }
                Ok(())
            }
            WeightSpec::Constant { value } if !(value.is_finite() && *value >= 0.0) => {
                domain("constant weight must be finite and nonnegative")
            }
            WeightSpec::Composite { factors } => {
                for f in factors {
                    if !f.power.is_finite() {
                        return domain("composite factor power must be finite");
                    }
                    f.weight.validate()?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `self ^ s` as a new spec, folding powers of power weights.
    pub fn pow(&self, s: f64) -> WeightSpec {
        match self {
            WeightSpec::Power { exponent } => WeightSpec::Power { exponent: exponent * s },
            WeightSpec::Constant { value } => WeightSpec::Constant { value: value.powf(s) },
            WeightSpec::ShiftedPowerInverse { rho, multiplicity } => {
                WeightSpec::ShiftedPowerInverse { rho: *rho, multiplicity: multiplicity * s }
            }
            other => WeightSpec::Composite { factors: vec![Factor { weight: other.clone(), power: s }] },
        }
    }

    /// Pointwise product of weights.
    pub fn product(ws: &[WeightSpec]) -> WeightSpec {
        if ws.iter().all(|w| matches!(w, WeightSpec::Power { .. })) {
            let e = ws.iter().map(|w| if let WeightSpec::Power { exponent } = w { *exponent } else { 0.0 }).sum();
            return WeightSpec::Power { exponent: e };
        }
        WeightSpec::Composite { factors: ws.iter().map(|w| Factor { weight: w.clone(), power: 1.0 }).collect() }
    }

    pub fn radial(&self) -> Radial {
        Radial::from_spec(self)
    }

    /// Weight value at a point.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.radial().eval(crate::geometry::norm(x))
    }
}

/// `(w, v_1, ..., v_m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightVector {
    pub w: WeightSpec,
    pub v: Vec<WeightSpec>,
}

impl WeightVector {
    pub fn new(w: WeightSpec, v: Vec<WeightSpec>) -> Result<WeightVector> {
        w.validate()?;
        for vi in &v {
            vi.validate()?;
        }
        if v.is_empty() {
            return domain("weight vector needs at least one v_i");
        }
        Ok(WeightVector { w, v })
    }

    pub fn m(&self) -> usize {
        self.v.len()
    }

    /// Pair with `w = prod v_i`.
    pub fn with_product_lead(v: Vec<WeightSpec>) -> Result<WeightVector> {
        WeightVector::new(WeightSpec::product(&v), v)
    }
}
