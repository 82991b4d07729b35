use std::path::Path;

use serde_json::{json, Value};

use multifrac::experiments::{
    run_boundedness_experiment, run_corollary_equivalence, run_local_lemma_experiment, run_triviality_probe,
    verify_identity_suites, verify_power_integral_asymptotic, AsymptoticConfig, ExperimentReport, SuiteSizes, Verdict,
};
use multifrac::params::{classify_region, fmt17, region_grid, Panel};
use multifrac::weights::{
    a_p_quantity, a_pq_quantity, construct_weights, doubling_quantity, empirical_class_sup, hm_full_quantity,
    hm_global_quantity, hm_local_quantity, rh_quantity, SweepResult,
};
use multifrac::{Ball, BallFamily, ExponentVector, ParameterPoint};

use crate::config::{config_hash, load, CheckConfig, ConstructConfig, ExperimentFile, QuantitySpec, VerifyConfig};
use crate::output::{self, num, OutDir, Stamp, PROFILE_HEADER};
use crate::{CliError, PanelArg, Suite};

fn panel(arg: PanelArg) -> Panel {
    match arg {
        PanelArg::BetaGt => Panel::BetaGt,
        PanelArg::BetaEq => Panel::BetaEq,
        PanelArg::BetaLt => Panel::BetaLt,
    }
}

pub fn region(arg: PanelArg, resolution: usize, out: &Path) -> Result<(), CliError> {
    let panel = panel(arg);
    let grid = region_grid(panel, resolution).map_err(|e| CliError::Config(e.to_string()))?;
    let hash = config_hash(&json!({ "panel": panel.name(), "resolution": resolution }));
    let dir = OutDir::new(out, Stamp { command: "region", config_hash: hash, seed: 0 })?;
    let stem = format!("region_{}", panel.name());
    let csv = dir.csv_text(&format!("{stem}.csv"), &grid.to_csv())?;
    let cells: Vec<Value> = grid
        .cells
        .iter()
        .map(|c| {
            json!({
                "inv_p": num(c.inv_p),
                "delta_tilde": num(c.delta_tilde),
                "tag": c.class.tag(),
                "tau": num(c.tau),
                "natural_edge": num(c.natural_edge),
                "on_edge": c.on_edge,
            })
        })
        .collect();
    let pt = grid.point;
    dir.json(
        &format!("{stem}.json"),
        json!({
            "panel": panel.name(),
            "resolution": resolution,
            "point": { "n": pt.n, "m": pt.m, "beta": num(pt.beta), "delta": num(pt.delta), "gamma": num(pt.gamma) },
            "cells": cells,
        }),
    )?;
    let nontrivial = grid.cells.iter().filter(|c| c.class.case().is_some()).count();
    println!("{}: {} cells, {nontrivial} nontrivial, written to {}", panel.name(), grid.cells.len(), csv.display());
    Ok(())
}

fn one_ball(ball: &Ball) -> multifrac::Result<BallFamily> {
    BallFamily::new(vec![ball.clone()])
}

fn sweep_quantity(q: &QuantitySpec, cfg: &CheckConfig, family: &BallFamily) -> Result<SweepResult, CliError> {
    let (pair, p, point) = (&cfg.weights, &cfg.p, &cfg.point);
    let target = q.target().map(|t| t.resolve(pair)).transpose()?;
    let sweep = empirical_class_sup(family, |b| match q {
        QuantitySpec::HmFull => hm_full_quantity(pair, p, point, b),
        QuantitySpec::HmLocal => hm_local_quantity(pair, p, point, b),
        QuantitySpec::HmGlobal => hm_global_quantity(pair, p, point, b),
        QuantitySpec::Apq { q } => a_pq_quantity(&pair.v, p, *q, b),
        QuantitySpec::Ap => a_p_quantity(&pair.v, p, b),
        QuantitySpec::ReverseHolder { s, .. } => rh_quantity(target.as_ref().unwrap(), *s, &one_ball(b)?),
        QuantitySpec::Doubling { .. } => doubling_quantity(target.as_ref().unwrap(), &one_ball(b)?),
    })?;
    Ok(sweep)
}

pub fn check_weights(path: &Path, seed: Option<u64>, out: &Path) -> Result<(), CliError> {
    let mut cfg: CheckConfig = load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.point.validate()?;
    if cfg.p.m() != cfg.point.m || cfg.weights.m() != cfg.point.m {
        return Err(CliError::Config(format!("p and weights need m = {} entries", cfg.point.m)));
    }
    let family = cfg.family.build(cfg.point.n)?;
    let dir = OutDir::new(out, Stamp { command: "check-weights", config_hash: config_hash(&cfg), seed: cfg.seed })?;

    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut infinite = Vec::new();
    let region = classify_region(&cfg.point, &cfg.p);
    println!("region {region}");
    for q in &cfg.quantities {
        let name = q.name();
        let sweep = sweep_quantity(q, &cfg, &family)?;
        for r in &sweep.profile {
            let center = r.center.iter().map(|c| fmt17(*c)).collect::<Vec<_>>().join(" ");
            rows.push(vec![name.clone(), r.ball_id.to_string(), fmt17(r.radius), center, fmt17(r.value)]);
        }
        let slope = sweep.slope();
        println!("{name:<28} sup {}  slope {}", fmt17(sweep.sup), slope.map_or("-".into(), fmt17));
        if let Some(b) = &sweep.infinite_at {
            println!("{:<28} first infinite at center {:?}, radius {}", "", b.center, b.radius);
            infinite.push(format!("{name} at center {:?}, radius {}", b.center, b.radius));
        }
        results.push(json!({
            "quantity": name,
            "sup": num(sweep.sup),
            "argmax": output::ball(&sweep.argmax),
            "infinite_at": sweep.infinite_at.as_ref().map(output::ball),
            "loglog_slope": slope.map(num),
        }));
    }
    dir.csv("check_weights.csv", &["quantity", "ball_id", "radius", "center", "value"], &rows)?;
    dir.json(
        "check_weights.json",
        json!({ "region": region.tag(), "balls": family.len(), "quantities": results }),
    )?;
    if infinite.is_empty() {
        Ok(())
    } else {
        Err(CliError::Infinite(infinite.join("; ")))
    }
}

/// Parameter-point flags of `construct`; each overrides the config file.
pub struct PointFlags {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub delta_tilde: Option<f64>,
    pub gamma: Option<f64>,
    pub p: Option<String>,
}

fn parse_exponents(s: &str) -> Result<ExponentVector, CliError> {
    let entries = s
        .split(',')
        .map(|t| match t.trim() {
            "inf" => Ok(f64::INFINITY),
            v => v.parse::<f64>().map_err(|_| CliError::Config(format!("bad exponent '{v}' in --p"))),
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    ExponentVector::new(entries).map_err(|e| CliError::Config(e.to_string()))
}

fn merge_point(base: Option<ConstructConfig>, f: PointFlags) -> Result<ConstructConfig, CliError> {
    let missing = |name: &str| CliError::Config(format!("--{name} is required without --config"));
    let (bp, bpv) = match base {
        Some(c) => (Some(c.point), Some(c.p)),
        None => (None, None),
    };
    let point = ParameterPoint {
        n: f.n.or(bp.map(|b| b.n)).ok_or_else(|| missing("n"))?,
        m: f.m.or(bp.map(|b| b.m)).ok_or_else(|| missing("m"))?,
        beta: f.beta.or(bp.map(|b| b.beta)).ok_or_else(|| missing("beta"))?,
        delta: f.delta.or(bp.map(|b| b.delta)).ok_or_else(|| missing("delta"))?,
        delta_tilde: f.delta_tilde.or(bp.map(|b| b.delta_tilde)).ok_or_else(|| missing("delta-tilde"))?,
        gamma: f.gamma.or(bp.map(|b| b.gamma)).unwrap_or(1.0),
    };
    let p = match f.p {
        Some(s) => parse_exponents(&s)?,
        None => bpv.ok_or_else(|| missing("p"))?,
    };
    Ok(ConstructConfig { point, p })
}

pub fn construct(path: Option<&Path>, flags: PointFlags, out: &Path) -> Result<(), CliError> {
    let base = path.map(load::<ConstructConfig>).transpose()?;
    let input = merge_point(base, flags)?;
    let hash = config_hash(&input);
    let (pair, recipe) = construct_weights(&input.point, &input.p)?;
    println!("case ({}) rho = {} xi = {:?}", recipe.case.letter(), recipe.rho, recipe.xi);
    let spec = CheckConfig {
        seed: 0,
        point: input.point,
        p: input.p,
        weights: pair,
        family: Default::default(),
        quantities: vec![QuantitySpec::HmFull],
        recipe: Some(recipe),
    };
    let body = toml::to_string(&spec).map_err(|e| CliError::Io(format!("cannot render weights: {e}")))?;
    let text = format!("# command=construct\n# config_sha256={hash}\n# seed=0\n{body}");
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(e.to_string()))?;
    }
    std::fs::write(out, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?;
    println!("written to {}", out.display());
    Ok(())
}

fn write_report(dir: &OutDir, stem: &str, report: &ExperimentReport) -> Result<(), CliError> {
    dir.json(&format!("{stem}.json"), output::report_json(report))?;
    if !report.profile.is_empty() {
        dir.csv(&format!("{stem}_profile.csv"), &PROFILE_HEADER, &output::profile_csv_rows(&report.profile))?;
    }
    let text = output::report_text(report, &dir.stamp);
    dir.text(&format!("{stem}.txt"), &text)?;
    print!("{text}");
    Ok(())
}

/// Exit status for a batch of reports: any degenerate run wins, then any
/// failure.
fn verdicts(reports: &[&ExperimentReport]) -> Result<(), CliError> {
    let ids = |v: Verdict| reports.iter().filter(|r| r.verdict == v).map(|r| r.id.clone()).collect::<Vec<_>>();
    let degenerate = ids(Verdict::Degenerate);
    if !degenerate.is_empty() {
        return Err(CliError::Degenerate(degenerate.join(", ")));
    }
    let failed = ids(Verdict::Fail);
    if !failed.is_empty() {
        return Err(CliError::Failed(failed.join(", ")));
    }
    Ok(())
}

pub fn verify(suite: Suite, path: Option<&Path>, seed: Option<u64>, out: &Path) -> Result<(), CliError> {
    let mut cfg = match path {
        Some(p) => load::<VerifyConfig>(p)?,
        None => VerifyConfig { seed: 0, sizes: SuiteSizes::default() },
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let hash = config_hash(&json!({ "suite": suite, "config": cfg }));
    let dir = OutDir::new(out, Stamp { command: "verify", config_hash: hash, seed: cfg.seed })?;
    match suite {
        Suite::Identities => {
            let report = verify_identity_suites(cfg.seed, &cfg.sizes)?;
            write_report(&dir, "identities", &report)?;
            verdicts(&[&report])
        }
        Suite::Asymptotic => {
            let mut reports = Vec::new();
            for (stem, alpha) in [("asymptotic_neg_half", -0.5), ("asymptotic_zero", 0.0), ("asymptotic_one", 1.0)] {
                let r = verify_power_integral_asymptotic(alpha, &AsymptoticConfig::default())?;
                write_report(&dir, stem, &r)?;
                reports.push(r);
            }
            verdicts(&reports.iter().collect::<Vec<_>>())
        }
    }
}

pub fn experiment(path: &Path, seed: Option<u64>, out: &Path) -> Result<(), CliError> {
    let mut cfg: ExperimentFile = load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let chosen = [
        cfg.boundedness.is_some(),
        cfg.local_lemma.is_some(),
        cfg.probe.is_some(),
        cfg.corollary.is_some(),
        cfg.asymptotic.is_some(),
    ];
    if chosen.iter().filter(|c| **c).count() != 1 {
        return Err(CliError::Config(
            "exactly one of [boundedness], [local_lemma], [probe], [corollary], [asymptotic] is required".into(),
        ));
    }
    let dir = OutDir::new(out, Stamp { command: "experiment", config_hash: config_hash(&cfg), seed: cfg.seed })?;
    let mut report = if let Some(b) = &cfg.boundedness {
        let family = cfg.family.build(b.point.n)?;
        run_boundedness_experiment(b, &family, &cfg.settings)?
    } else if let Some(l) = &cfg.local_lemma {
        let family = cfg.family.build(l.point.n)?;
        run_local_lemma_experiment(&l.inputs, l.alpha_tilde, &l.pair, &l.p, &l.point, &family, &cfg.settings)?
    } else if let Some(pr) = &cfg.probe {
        run_triviality_probe(&pr.pair, &pr.p, &pr.point, pr.direction)?
    } else if let Some(c) = &cfg.corollary {
        let family = cfg.family.build(c.point.n)?;
        run_corollary_equivalence(&c.v, &c.p, &c.point, &family, &cfg.settings)?
    } else {
        let a = cfg.asymptotic.as_ref().expect("one table chosen");
        verify_power_integral_asymptotic(a.alpha, &a.sweep)?
    };
    report.seed = Some(cfg.seed);
    let stem = report.id.clone();
    write_report(&dir, &stem, &report)?;
    verdicts(&[&report])
}
