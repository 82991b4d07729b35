//! Explicit nontrivial weight pairs for each case of the wedge.

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::params::{classify_region, natural_delta, ExponentVector, NontrivialCase, ParameterPoint, RegionClass, TIE_EPS};

use super::{Factor, WeightSpec, WeightVector};

/// Exponent of the shifted-power lead in case (f).
pub const CASE_F_RHO: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseDBranch {
    /// Some `i` in `I2` has `theta_i <= 0`: the case (c) argument applies.
    SomeThetaNonpositive,
    /// Every `theta_i > 0` on `I2`: same weights, the log estimate is
    /// absorbed by a small proof-internal epsilon.
    AllThetaPositive,
}

/// Exponents behind a constructed pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionRecipe {
    pub case: NontrivialCase,
    /// Exponent of the lead weight (`w = |x|^rho`, or the shifted-power
    /// exponent in case (f)).
    pub rho: f64,
    /// `v_i = |x|^{xi_i}` (unused in case (f)).
    pub xi: Vec<f64>,
    /// `theta_i = n/p_i + (delta - beta)/m`.
    pub theta: Vec<f64>,
    pub epsilon: Option<f64>,
    pub case_d_branch: Option<CaseDBranch>,
}

fn thetas(point: &ParameterPoint, p: &ExponentVector) -> Vec<f64> {
    let n = point.n as f64;
    let m = point.m as f64;
    (0..p.m()).map(|i| n * p.inv(i) + (point.delta - point.beta) / m).collect()
}

/// Weights witnessing nontriviality of the class at `(point, p)`.
pub fn construct_weights(point: &ParameterPoint, p: &ExponentVector) -> Result<(WeightVector, ConstructionRecipe)> {
    point.validate()?;
    if p.m() != point.m {
        return Err(Error::Domain(format!("exponent vector has {} entries, m = {}", p.m(), point.m)));
    }
    let class = classify_region(point, p);
    let case = match class {
        RegionClass::Nontrivial(c) => c,
        other => {
            return Err(Error::Region { class: other, reason: other.explanation().to_string() });
        }
    };
    let n = point.n as f64;
    let m = point.m as f64;
    let beta = point.beta;
    let dt = point.delta_tilde;
    let tau = point.tau();
    let inv_p = p.inv_aggregate();
    let theta = thetas(point, p);
    let ones = p.ones();
    let m1 = ones.len() as f64;
    let conj_inv = |i: usize| 1.0 - p.inv(i);

    let power_pair = |rho: f64, xi: &[f64]| {
        WeightVector::new(WeightSpec::power(rho), xi.iter().map(|&x| WeightSpec::power(x)).collect())
    };

    let (pair, recipe) = match case {
        NontrivialCase::A => {
            let eps = 0.5 * (point.mn() - beta + dt) / (m - m1);
            let xi: Vec<f64> = (0..p.m()).map(|i| if p.is_one(i) { 0.0 } else { n * conj_inv(i) - eps }).collect();
            let rho = xi.iter().sum::<f64>() + dt - beta + n * inv_p;
            (power_pair(rho, &xi)?, ConstructionRecipe { case, rho, xi, theta, epsilon: Some(eps), case_d_branch: None })
        }
        NontrivialCase::B => {
            let xi: Vec<f64> = (0..p.m()).map(|i| (beta - dt) / m - n * p.inv(i)).collect();
            (power_pair(0.0, &xi)?, ConstructionRecipe { case, rho: 0.0, xi, theta, epsilon: None, case_d_branch: None })
        }
        NontrivialCase::C | NontrivialCase::D => {
            let xi: Vec<f64> = (0..p.m())
                .map(|i| if p.is_one(i) { 0.0 } else { 0.5 * ((beta - tau) / m - n * p.inv(i) + n * conj_inv(i)) })
                .collect();
            let rho = xi.iter().sum::<f64>() + tau - beta + n * inv_p;
            let branch = (case == NontrivialCase::D).then(|| {
                if p.above_one().iter().any(|&i| theta[i] <= 0.0) {
                    CaseDBranch::SomeThetaNonpositive
                } else {
                    CaseDBranch::AllThetaPositive
                }
            });
            (power_pair(rho, &xi)?, ConstructionRecipe { case, rho, xi, theta, epsilon: None, case_d_branch: branch })
        }
        NontrivialCase::E => {
            let natural = natural_delta(beta, point.n, p);
            let at_delta = (dt - point.delta).abs() <= TIE_EPS;
            let at_natural = (dt - natural).abs() <= TIE_EPS;
            let all_neg = theta.iter().all(|&t| t < 0.0);
            let all_pos = theta.iter().all(|&t| t > 0.0);
            if at_delta && !all_neg {
                return precondition(format!(
                    "delta_tilde = delta < beta - n/p needs every theta_i < 0, got {theta:?}"
                ));
            }
            if at_natural && !(all_neg || all_pos) {
                return precondition(format!(
                    "delta_tilde = beta - n/p < delta needs all theta_i of one strict sign, got {theta:?}"
                ));
            }
            let rho = dt - tau;
            let xi: Vec<f64> = theta.iter().map(|t| (point.delta - tau) / m - t).collect();
            (power_pair(rho, &xi)?, ConstructionRecipe { case, rho, xi, theta, epsilon: None, case_d_branch: None })
        }
        NontrivialCase::F => {
            let w = if m1 == 0.0 {
                WeightSpec::constant(1.0)
            } else {
                WeightSpec::ShiftedPowerInverse { rho: CASE_F_RHO, multiplicity: m1 }
            };
            let v = (0..p.m())
                .map(|i| {
                    if p.is_one(i) {
                        WeightSpec::Exponential
                    } else {
                        // v_i = g_i^{-1} with g_i = (1 + |x|)^{-k n} in L^{p_i'}
                        let k = if p.get(i).is_infinite() { 2.0 } else { 1.0 };
                        WeightSpec::Composite {
                            factors: vec![Factor {
                                weight: WeightSpec::ShiftedPowerInverse { rho: 1.0, multiplicity: 1.0 },
                                power: -k * n,
                            }],
                        }
                    }
                })
                .collect();
            (
                WeightVector::new(w, v)?,
                ConstructionRecipe { case, rho: CASE_F_RHO, xi: vec![], theta, epsilon: None, case_d_branch: None },
            )
        }
    };
    check_recipe(point, p, &recipe)?;
    Ok((pair, recipe))
}

/// Case preconditions that hold by algebra alone.
fn check_recipe(point: &ParameterPoint, p: &ExponentVector, r: &ConstructionRecipe) -> Result<()> {
    let n = point.n as f64;
    if r.case == NontrivialCase::F {
        return Ok(());
    }
    if r.case != NontrivialCase::B && !(r.rho > 0.0) {
        return precondition(format!("constructed rho = {} is not positive", r.rho));
    }
    for (i, &x) in r.xi.iter().enumerate() {
        if !(x < n * (1.0 - p.inv(i))) {
            return precondition(format!("xi_{} = {x} is not below n/p_{}'", i + 1, i + 1));
        }
        let needs_negative = matches!(r.case, NontrivialCase::B | NontrivialCase::E);
        if needs_negative && p.is_one(i) && !(x < 0.0) {
            return precondition(format!("xi_{} = {x} must be negative on p_i = 1", i + 1));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(beta: f64, dt: f64) -> ParameterPoint {
        ParameterPoint::new(1, 2, beta, 0.3, dt, 1.0).unwrap()
    }

    fn pv(v: &[f64]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn case_e_example() {
        let (pair, r) = construct_weights(&pt(0.9, -0.2), &pv(&[2.0, 2.0])).unwrap();
        assert_eq!(r.case, NontrivialCase::E);
        assert!((r.rho - 0.2).abs() < 1e-15);
        for i in 0..2 {
            assert!((r.xi[i] - 0.15).abs() < 1e-15);
            assert!((r.theta[i] - 0.2).abs() < 1e-15);
        }
        assert_eq!(pair.w, WeightSpec::power(r.rho));
    }

    #[test]
    fn case_b_example() {
        let (pair, r) = construct_weights(&pt(1.0, -0.6), &pv(&[1.0, 2.0])).unwrap();
        assert_eq!(r.case, NontrivialCase::B);
        assert!((r.xi[0] + 0.2).abs() < 1e-15 && (r.xi[1] - 0.3).abs() < 1e-15);
        assert_eq!(pair.w, WeightSpec::power(0.0));
    }

    #[test]
    fn case_f_example() {
        let (pair, r) = construct_weights(&pt(1.0, -1.0), &pv(&[1.0, 2.0])).unwrap();
        assert_eq!(r.case, NontrivialCase::F);
        assert_eq!(pair.w, WeightSpec::ShiftedPowerInverse { rho: CASE_F_RHO, multiplicity: 1.0 });
        assert_eq!(pair.v[0], WeightSpec::Exponential);
        assert!((pair.v[1].eval(&[3.0]) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn case_d_branch_recorded() {
        let (_, r) = construct_weights(&pt(0.9, -0.4), &pv(&[2.0, 2.0])).unwrap();
        assert_eq!(r.case, NontrivialCase::D);
        assert_eq!(r.case_d_branch, Some(CaseDBranch::AllThetaPositive));
    }

    #[test]
    fn trivial_point_is_rejected_with_class() {
        match construct_weights(&pt(0.9, 0.5), &pv(&[2.0, 2.0])) {
            Err(Error::Region { class, .. }) => assert_eq!(class, RegionClass::TrivialWeightsA),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mixed_theta_on_upper_edge_is_rejected() {
        // delta_tilde = beta - n/p < delta with theta of mixed signs
        let point = pt(1.0, 1.0 - 1.25);
        let p = pv(&[1.0, 4.0]);
        assert_eq!(classify_region(&point, &p), RegionClass::Nontrivial(NontrivialCase::E));
        assert!(construct_weights(&point, &p).is_err());
    }
}
