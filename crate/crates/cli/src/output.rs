//! Report files. JSON spells non-finite numbers as the strings `"inf"`,
//! `"-inf"` and `"nan"` (plain serde_json would write `null`); CSV bodies use
//! 17 significant digits and are preceded by `#` lines carrying the config
//! hash and seed, so bodies are byte-identical across reruns.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use multifrac::experiments::{ExperimentReport, ProfileRow};
use multifrac::params::fmt17;
use multifrac::Ball;

use crate::CliError;

/// Provenance stamped on every output file.
#[derive(Debug, Clone)]
pub struct Stamp {
    pub command: &'static str,
    pub config_hash: String,
    pub seed: u64,
}

impl Stamp {
    fn csv_header(&self) -> String {
        format!("# command={}\n# config_sha256={}\n# seed={}\n", self.command, self.config_hash, self.seed)
    }

    fn insert(&self, obj: &mut Map<String, Value>) {
        obj.insert("command".into(), json!(self.command));
        obj.insert("config_sha256".into(), json!(self.config_hash));
        obj.insert("seed".into(), json!(self.seed));
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn num_map(m: &BTreeMap<String, f64>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.clone(), num(*v))).collect())
}

pub fn ball(b: &Ball) -> Value {
    json!({ "center": nums(&b.center), "radius": num(b.radius) })
}

fn profile_row(r: &ProfileRow) -> Value {
    json!({
        "ball_id": r.ball_id,
        "radius": num(r.radius),
        "center": nums(&r.center),
        "numerator": num(r.numerator),
        "denominator": num(r.denominator),
        "value": num(r.value),
    })
}

pub fn report_json(report: &ExperimentReport) -> Value {
    json!({
        "id": report.id,
        "verdict": report.verdict,
        "parameters": num_map(&report.parameters),
        "labels": report.labels,
        "summary": num_map(&report.summary),
        "thresholds": num_map(&report.thresholds),
        "notes": report.notes,
        "seed": report.seed,
        "runtime_ms": num(report.runtime_ms),
        "profile": report.profile.iter().map(profile_row).collect::<Vec<_>>(),
    })
}

/// Output directory, created on demand.
pub struct OutDir {
    root: PathBuf,
    pub stamp: Stamp,
}

impl OutDir {
    pub fn new(root: &Path, stamp: Stamp) -> Result<OutDir, CliError> {
        std::fs::create_dir_all(root).map_err(|e| CliError::Io(format!("cannot create {}: {e}", root.display())))?;
        Ok(OutDir { root: root.to_path_buf(), stamp })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn write(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        std::fs::write(&path, body).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    /// JSON object with the stamp merged in at the top level.
    pub fn json(&self, name: &str, value: Value) -> Result<PathBuf, CliError> {
        let mut obj = match value {
            Value::Object(o) => o,
            other => {
                let mut o = Map::new();
                o.insert("data".into(), other);
                o
            }
        };
        self.stamp.insert(&mut obj);
        let text = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
        self.write(name, &(text + "\n"))
    }

    /// CSV with the stamp header; `body` already carries its column header.
    pub fn csv_text(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        self.write(name, &(self.stamp.csv_header() + body))
    }

    pub fn csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
        for row in rows {
            w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?).expect("csv is utf-8");
        self.csv_text(name, &body)
    }

    pub fn text(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        self.write(name, body)
    }
}

pub fn profile_csv_rows(profile: &[ProfileRow]) -> Vec<Vec<String>> {
    profile
        .iter()
        .map(|r| {
            vec![
                r.ball_id.to_string(),
                fmt17(r.radius),
                r.center.iter().map(|c| fmt17(*c)).collect::<Vec<_>>().join(" "),
                fmt17(r.numerator),
                fmt17(r.denominator),
                fmt17(r.value),
            ]
        })
        .collect()
}

pub const PROFILE_HEADER: [&str; 6] = ["ball_id", "radius", "center", "numerator", "denominator", "value"];

/// Plain-text rendering of a report.
pub fn report_text(report: &ExperimentReport, stamp: &Stamp) -> String {
    let mut out = format!("{}: {:?}\n", report.id, report.verdict);
    out.push_str(&format!("config_sha256 {}\nseed {}\n", stamp.config_hash, stamp.seed));
    for (k, v) in &report.parameters {
        out.push_str(&format!("  param   {k:<24} {}\n", fmt17(*v)));
    }
    for (k, v) in &report.labels {
        out.push_str(&format!("  label   {k:<24} {v}\n"));
    }
    for (k, v) in &report.summary {
        out.push_str(&format!("  summary {k:<24} {}\n", fmt17(*v)));
    }
    for (k, v) in &report.thresholds {
        out.push_str(&format!("  thresh  {k:<24} {}\n", fmt17(*v)));
    }
    for note in &report.notes {
        out.push_str(&format!("  note    {note}\n"));
    }
    out
}
