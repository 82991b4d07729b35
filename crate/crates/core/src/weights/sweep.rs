use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{Ball, BallFamily};
use crate::numeric::loglog_slope;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub ball_id: usize,
    pub radius: f64,
    pub center: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// Supremum over the family; `+inf` if any ball gave `+inf`.
    pub sup: f64,
    pub argmax: Ball,
    /// First ball (in family order) with an infinite value.
    pub infinite_at: Option<Ball>,
    pub profile: Vec<SweepRow>,
}

impl SweepResult {
    /// `(R, max over balls of radius R)` in increasing `R`.
    pub fn radius_profile(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for row in &self.profile {
            match out.iter_mut().find(|(r, _)| *r == row.radius) {
                Some(entry) => entry.1 = entry.1.max(row.value),
                None => out.push((row.radius, row.value)),
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }

    /// Least-squares log-log slope of the radius profile.
    pub fn slope(&self) -> Option<f64> {
        loglog_slope(&self.radius_profile())
    }
}

/// Evaluate a per-ball quantity over the family (in parallel) and reduce in
/// family order.
pub fn empirical_class_sup<F>(family: &BallFamily, quantity: F) -> Result<SweepResult>
where
    F: Fn(&Ball) -> Result<f64> + Sync,
{
    let values: Vec<f64> = family.balls().par_iter().map(&quantity).collect::<Result<Vec<f64>>>()?;
    let mut sup = f64::NEG_INFINITY;
    let mut arg = 0;
    let mut infinite_at = None;
    let mut profile = Vec::with_capacity(values.len());
    for (id, (ball, &v)) in family.balls().iter().zip(&values).enumerate() {
        if v > sup || v.is_nan() && sup == f64::NEG_INFINITY {
            sup = v;
            arg = id;
        }
        if v == f64::INFINITY && infinite_at.is_none() {
            infinite_at = Some(ball.clone());
        }
        profile.push(SweepRow { ball_id: id, radius: ball.radius, center: ball.center.clone(), value: v });
    }
    let argmax = match &infinite_at {
        Some(b) => b.clone(),
        None => family.balls()[arg].clone(),
    };
    Ok(SweepResult { sup, argmax, infinite_at, profile })
}
