use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::logspace;

/// Volume of the unit ball in `R^n`: `c_1 = 2`, `c_2 = pi`,
/// `c_n = c_{n-2} * 2 pi / n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

/// Surface measure of the unit sphere `S^{n-1}` (`2` points when `n = 1`).
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Ball> {
        if center.is_empty() {
            return domain("ball center must have at least one coordinate");
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return domain(format!("ball radius must be positive and finite, got {radius}"));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return domain("ball center must be finite");
        }
        Ok(Ball { center, radius })
    }

    /// Ball in `R^1` centred at `c`.
    pub fn interval(c: f64, radius: f64) -> Ball {
        Ball::new(vec![c], radius).expect("valid interval ball")
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.radius.powi(self.dim() as i32)
    }

    /// `|x_B|`.
    pub fn center_norm(&self) -> f64 {
        norm(&self.center)
    }

    /// The concentric ball with radius scaled by `k`.
    pub fn dilate(&self, k: f64) -> Ball {
        Ball { center: self.center.clone(), radius: self.radius * k }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        dist(x, &self.center) < self.radius
    }
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// A deterministic, ordered, nonempty list of balls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallFamily {
    balls: Vec<Ball>,
}

/// Center offsets of the standard family, as multiples of the radius along
/// the first coordinate axis.
pub const STANDARD_CENTER_MULTIPLES: [f64; 7] = [0.0, 0.5, -0.5, 2.0, -2.0, 10.0, -10.0];

impl BallFamily {
    pub fn new(balls: Vec<Ball>) -> Result<BallFamily> {
        if balls.is_empty() {
            return domain("ball family must be nonempty");
        }
        let n = balls[0].dim();
        if balls.iter().any(|b| b.dim() != n) {
            return domain("ball family mixes dimensions");
        }
        Ok(BallFamily { balls })
    }

    /// Radii log-spaced over `[r_min, r_max]` with `per_decade` radii per
    /// decade, each combined with centers `k * R * e_1` for `k` in
    /// `multiples`. Radius-major order.
    pub fn sweep(n: usize, r_min: f64, r_max: f64, per_decade: usize, multiples: &[f64]) -> Result<BallFamily> {
        if n == 0 || !(r_min > 0.0 && r_max >= r_min) || per_decade == 0 || multiples.is_empty() {
            return domain("invalid ball sweep parameters");
        }
        let decades = (r_max / r_min).log10();
        let count = (decades * per_decade as f64).round() as usize + 1;
        let radii = logspace(r_min, r_max, count);
        Self::from_radii(n, &radii, multiples)
    }

    pub fn from_radii(n: usize, radii: &[f64], multiples: &[f64]) -> Result<BallFamily> {
        let mut balls = Vec::with_capacity(radii.len() * multiples.len());
        for &r in radii {
            for &k in multiples {
                let mut c = vec![0.0; n];
                c[0] = k * r;
                balls.push(Ball::new(c, r)?);
            }
        }
        BallFamily::new(balls)
    }

    /// Radii `10^-3 .. 10^3`, two per decade, centers `{0, ±R/2, ±2R, ±10R}`.
    pub fn standard(n: usize) -> BallFamily {
        Self::sweep(n, 1e-3, 1e3, 2, &STANDARD_CENTER_MULTIPLES).expect("standard family")
    }

    /// Balls `B(0, R)` for the given radii.
    pub fn centered(n: usize, radii: &[f64]) -> Result<BallFamily> {
        Self::from_radii(n, radii, &[0.0])
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.balls[0].dim()
    }
}
