use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::geometry::{unit_ball_volume, Ball};
use crate::numeric::logspace;
use crate::weights::{ball_integral, WeightSpec};

use super::{ExperimentReport, ProfileRow, Verdict};

/// Largest accepted max/min of the normalised ratio over a sweep.
pub const ASYMPTOTIC_SPREAD_MAX: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticConfig {
    pub n: usize,
    pub radii: Vec<f64>,
    /// Centre offsets `|x_B| / R`; centres lie on the first axis.
    pub offsets: Vec<f64>,
}

impl Default for AsymptoticConfig {
    /// Seven radii over six decades and offsets `0, 1/2, 2, 10` in `R^1`.
    fn default() -> Self {
        AsymptoticConfig { n: 1, radii: logspace(1e-3, 1e3, 7), offsets: vec![0.0, 0.5, 2.0, 10.0] }
    }
}

/// `int_B |x|^alpha / (R^n max(R, |x_B|)^alpha)` over the configured balls.
/// The profile value is this ratio divided by the unit-ball volume, which
/// makes `alpha = 0` give exactly 1; the raw ratio is the row numerator.
pub fn verify_power_integral_asymptotic(alpha: f64, cfg: &AsymptoticConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let n = cfg.n;
    if n == 0 {
        return domain("dimension must be at least 1");
    }
    if !(alpha > -(n as f64)) {
        return domain(format!("alpha = {alpha} must exceed -n = {}", -(n as f64)));
    }
    let w = WeightSpec::power(alpha);
    let cn = unit_ball_volume(n);
    let mut report = ExperimentReport::new("power_integral_asymptotic");
    report.param("n", n as f64).param("alpha", alpha);
    let mut id = 0;
    for &r in &cfg.radii {
        for &k in &cfg.offsets {
            let mut center = vec![0.0; n];
            center[0] = k * r;
            let ball = Ball::new(center, r)?;
            let raw = ball_integral(&w, &ball) / (r.powi(n as i32) * r.max(k * r).powf(alpha));
            report.profile.push(ProfileRow {
                ball_id: id,
                radius: r,
                center: ball.center.clone(),
                numerator: raw,
                denominator: cn,
                value: raw / cn,
            });
            id += 1;
        }
    }
    let lo = report.profile.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let hi = report.profile.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    report.stat("c1", lo).stat("c2", hi).stat("raw_c1", lo * cn).stat("raw_c2", hi * cn);
    report.threshold("spread_max", ASYMPTOTIC_SPREAD_MAX);
    report.verdict = if lo > 0.0 && hi.is_finite() && hi / lo < ASYMPTOTIC_SPREAD_MAX { Verdict::Pass } else { Verdict::Fail };
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}
