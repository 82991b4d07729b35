use super::WeightSpec;

/// Piecewise-constant radial table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub edges: Vec<f64>,
    pub values: Vec<f64>,
}

impl Table {
    fn at(&self, r: f64) -> f64 {
        let k = self.edges.partition_point(|&e| e <= r);
        self.values[k.saturating_sub(1)]
    }
}

/// Flattened radial profile
/// `coef * r^power * e^{rate r} * prod (1 + r^rho)^{-mu} * prod table(r)^e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Radial {
    pub coef: f64,
    pub power: f64,
    pub rate: f64,
    pub shifted: Vec<(f64, f64)>,
    pub tables: Vec<(Table, f64)>,
}

impl Radial {
    pub fn one() -> Radial {
        Radial { coef: 1.0, power: 0.0, rate: 0.0, shifted: vec![], tables: vec![] }
    }

    pub fn from_spec(spec: &WeightSpec) -> Radial {
        let mut r = Radial::one();
        r.absorb(spec, 1.0);
        r
    }

    fn absorb(&mut self, spec: &WeightSpec, s: f64) {
        match spec {
            WeightSpec::Power { exponent } => self.power += exponent * s,
            WeightSpec::Constant { value } => self.coef *= value.powf(s),
            WeightSpec::Exponential => self.rate += s,
            WeightSpec::ShiftedPowerInverse { rho, multiplicity } => {
                if multiplicity * s != 0.0 {
                    self.shifted.push((*rho, multiplicity * s))
                }
            }
            WeightSpec::Tabulated { edges, values } => {
                if values.iter().all(|v| *v == values[0]) {
                    self.coef *= values[0].powf(s);
                } else {
                    self.tables.push((Table { edges: edges.clone(), values: values.clone() }, s))
                }
            }
            WeightSpec::Composite { factors } => {
                for f in factors {
                    self.absorb(&f.weight, s * f.power);
                }
            }
        }
    }

    pub fn pow(&self, s: f64) -> Radial {
        Radial {
            coef: self.coef.powf(s),
            power: self.power * s,
            rate: self.rate * s,
            shifted: self.shifted.iter().map(|&(rho, mu)| (rho, mu * s)).collect(),
            tables: self.tables.iter().map(|(t, e)| (t.clone(), e * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Radial) -> Radial {
        let mut shifted = self.shifted.clone();
        shifted.extend(other.shifted.iter().copied());
        let mut tables = self.tables.clone();
        tables.extend(other.tables.iter().cloned());
        Radial {
            coef: self.coef * other.coef,
            power: self.power + other.power,
            rate: self.rate + other.rate,
            shifted,
            tables,
        }
    }

    /// Only `coef * r^power`.
    pub fn is_pure_power(&self) -> bool {
        self.rate == 0.0 && self.shifted.is_empty() && self.tables.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coef == 0.0
    }

    pub fn eval(&self, r: f64) -> f64 {
        if self.coef == 0.0 {
            return 0.0;
        }
        let mut v = self.coef;
        if self.power != 0.0 {
            v *= r.powf(self.power);
        }
        if self.rate != 0.0 {
            v *= (self.rate * r).exp();
        }
        for &(rho, mu) in &self.shifted {
            v *= (1.0 + r.powf(rho)).powf(-mu);
        }
        for (t, e) in &self.tables {
            let tv = t.at(r);
            v = crate::numeric::ext_mul(v, tv.powf(*e));
        }
        if v.is_nan() {
            // 0 * inf between independent factors: a vanishing factor wins
            0.0
        } else {
            v
        }
    }

    /// Power exponent governing the behaviour as `r -> inf`, or `None` when
    /// an exponential factor dominates.
    pub fn exponent_at_infinity(&self) -> Option<f64> {
        if self.rate != 0.0 {
            return None;
        }
        Some(self.power - self.shifted.iter().map(|&(rho, mu)| rho * mu).sum::<f64>())
    }

    /// Sign of the exponential rate (`1` growth, `-1` decay, `0` none).
    pub fn exp_sign(&self) -> f64 {
        if self.rate > 0.0 {
            1.0
        } else if self.rate < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Table edges strictly inside `(lo, hi)`.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .tables
            .iter()
            .flat_map(|(t, _)| t.edges.iter().copied())
            .filter(|&e| e > lo && e < hi)
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }

    /// Largest table edge (0 without tables).
    pub fn last_edge(&self) -> f64 {
        self.tables.iter().flat_map(|(t, _)| t.edges.iter().copied()).fold(0.0, f64::max)
    }

    /// Value of the last table shell raised to its power, used for the
    /// behaviour at infinity.
    pub fn table_tail_factor(&self) -> f64 {
        self.tables.iter().map(|(t, e)| t.values.last().unwrap().powf(*e)).product()
    }

    /// Infinite at some shell because a zero table value is raised to a
    /// negative power.
    pub fn has_infinite_shell(&self) -> bool {
        self.tables.iter().any(|(t, e)| *e < 0.0 && t.values.iter().any(|v| *v == 0.0))
    }
}
