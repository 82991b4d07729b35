//! TOML run configurations. Every table rejects unknown keys, and the hash
//! of a run is taken over the canonical JSON of the effective config, after
//! flag overrides.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use multifrac::experiments::{AsymptoticConfig, BoundednessInputs, ExperimentConfig, ProbeDirection, SuiteSizes};
use multifrac::geometry::{BallFamily, STANDARD_CENTER_MULTIPLES};
use multifrac::operators::TestFunction;
use multifrac::weights::{ConstructionRecipe, WeightSpec, WeightVector};
use multifrac::{ExponentVector, ParameterPoint};

use crate::CliError;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// SHA-256 of the canonical JSON form, lowercase hex.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let canonical = serde_json::to_vec(config).expect("configs serialize");
    Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
}

/// Ball family selection; the dimension comes from the parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// Radii `10^-3 .. 10^3`, two per decade, centres `{0, ±R/2, ±2R, ±10R}`.
    Standard,
    Sweep { r_min: f64, r_max: f64, per_decade: usize, #[serde(default = "standard_multiples")] multiples: Vec<f64> },
    Radii { radii: Vec<f64>, #[serde(default = "centred")] multiples: Vec<f64> },
}

fn standard_multiples() -> Vec<f64> {
    STANDARD_CENTER_MULTIPLES.to_vec()
}

fn centred() -> Vec<f64> {
    vec![0.0]
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec::Standard
    }
}

impl FamilySpec {
    pub fn build(&self, n: usize) -> Result<BallFamily, CliError> {
        let family = match self {
            FamilySpec::Standard => Ok(BallFamily::standard(n)),
            FamilySpec::Sweep { r_min, r_max, per_decade, multiples } => {
                BallFamily::sweep(n, *r_min, *r_max, *per_decade, multiples)
            }
            FamilySpec::Radii { radii, multiples } => BallFamily::from_radii(n, radii, multiples),
        };
        family.map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Which weight a single-weight quantity acts on: `"w"` or `"v1"`, `"v2"`,
/// ..., raised to an optional power such as `-p_i'`.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub weight: String,
    pub power: Option<f64>,
}

impl Target {
    pub fn resolve(&self, pair: &WeightVector) -> Result<WeightSpec, CliError> {
        let base = if self.weight == "w" {
            pair.w.clone()
        } else {
            let slot = self
                .weight
                .strip_prefix('v')
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|k| (1..=pair.m()).contains(k))
                .ok_or_else(|| CliError::Config(format!("unknown weight '{}', expected w or v1..v{}", self.weight, pair.m())))?;
            pair.v[slot - 1].clone()
        };
        Ok(match self.power {
            Some(s) => base.pow(s),
            None => base,
        })
    }

    pub fn label(&self) -> String {
        match self.power {
            Some(s) => format!("{}^{s}", self.weight),
            None => self.weight.clone(),
        }
    }
}

/// A per-ball class quantity swept over the family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuantitySpec {
    HmFull,
    HmLocal,
    HmGlobal,
    /// `A_{p,q}` of `v`; `q = inf` gives `A_{p,inf}`.
    Apq { q: f64 },
    /// `A_p` of `v`.
    Ap,
    /// Reverse Hölder bracket of `weight^power`.
    ReverseHolder { s: f64, weight: String, #[serde(default)] power: Option<f64> },
    /// Doubling ratio of `weight^power`.
    Doubling { weight: String, #[serde(default)] power: Option<f64> },
}

impl QuantitySpec {
    pub fn name(&self) -> String {
        match self {
            QuantitySpec::HmFull => "hm_full".into(),
            QuantitySpec::HmLocal => "hm_local".into(),
            QuantitySpec::HmGlobal => "hm_global".into(),
            QuantitySpec::Apq { q } => format!("apq(q={q})"),
            QuantitySpec::Ap => "ap".into(),
            QuantitySpec::ReverseHolder { s, .. } => format!("rh(s={s}, {})", self.target().unwrap().label()),
            QuantitySpec::Doubling { .. } => format!("doubling({})", self.target().unwrap().label()),
        }
    }

    /// The single weight acted on, for the one-weight quantities.
    pub fn target(&self) -> Option<Target> {
        match self {
            QuantitySpec::ReverseHolder { weight, power, .. } | QuantitySpec::Doubling { weight, power } => {
                Some(Target { weight: weight.clone(), power: *power })
            }
            _ => None,
        }
    }
}

fn default_quantities() -> Vec<QuantitySpec> {
    vec![QuantitySpec::HmFull]
}

/// Input of `check-weights`, and the output format of `construct`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    #[serde(default)]
    pub seed: u64,
    pub point: ParameterPoint,
    pub p: ExponentVector,
    pub weights: WeightVector,
    #[serde(default)]
    pub family: FamilySpec,
    #[serde(default = "default_quantities")]
    pub quantities: Vec<QuantitySpec>,
    /// Written by `construct`; informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<ConstructionRecipe>,
}

/// Input of `construct` when given as a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructConfig {
    pub point: ParameterPoint,
    pub p: ExponentVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalLemmaSpec {
    pub inputs: Vec<TestFunction>,
    pub alpha_tilde: f64,
    pub pair: WeightVector,
    pub p: ExponentVector,
    pub point: ParameterPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub pair: WeightVector,
    pub p: ExponentVector,
    pub point: ParameterPoint,
    pub direction: ProbeDirection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorollarySpec {
    pub v: Vec<WeightSpec>,
    pub p: ExponentVector,
    pub point: ParameterPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticSpec {
    pub alpha: f64,
    #[serde(default)]
    pub sweep: AsymptoticConfig,
}

/// Input of `experiment`: exactly one experiment table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub family: FamilySpec,
    #[serde(default)]
    pub settings: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundedness: Option<BoundednessInputs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_lemma: Option<LocalLemmaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corollary: Option<CorollarySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asymptotic: Option<AsymptoticSpec>,
}

/// Optional input of `verify --suite identities`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sizes: SuiteSizes,
}
