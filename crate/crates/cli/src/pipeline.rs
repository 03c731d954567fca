use std::collections::BTreeMap;

use curvecount::hyperbolic::complete_torus_traces;
use curvecount::words::{abelianized_action, is_transvection, mcg_generators, OrbitOptions};
use curvecount::*;
use serde_json::{json, Value};

use crate::artifacts::{rows_to_csv, Row};
use crate::config::{ExperimentConfig, NormConfig, Pipeline, Structure};
use crate::RunError;

/// What a pipeline hands back for writing.
pub struct Output {
    pub csv: Option<Vec<u8>>,
    pub results: Value,
    /// Validation failures; the run still writes its report.
    pub failed_checks: usize,
}

pub fn bind_structure(model: &SurfaceModel, s: &Structure) -> Result<HolonomyRep> {
    match *s {
        Structure::Torus { x, y, z } => {
            let z = match z {
                Some(z) => z,
                None => complete_torus_traces(x, y)?,
            };
            torus_structure(model, x, y, z)
        }
        Structure::Genus2 { lengths, twists } => genus2_structure(model, FNCoords { lengths, twists }),
    }
}

pub fn bind_norm(model: &SurfaceModel, n: &NormConfig) -> Result<NormSpec> {
    Ok(match n {
        NormConfig::TorusDiamond => NormSpec::TorusDiamond,
        NormConfig::TorusSquare => NormSpec::TorusSquare,
        NormConfig::DtL1 => NormSpec::DtL1,
        NormConfig::DtWeighted { u, v } => NormSpec::DtWeighted(DtWeights { u: *u, v: *v }),
        NormConfig::Hyperbolic(s) => NormSpec::HyperbolicLength(bind_structure(model, s)?),
    })
}

fn required_norm(cfg: &ExperimentConfig, model: &SurfaceModel) -> std::result::Result<NormSpec, RunError> {
    let n = cfg.norm.as_ref().ok_or_else(|| cfg.missing("norm", "by this pipeline"))?;
    Ok(bind_norm(model, n)?)
}

fn required_schedule(cfg: &ExperimentConfig) -> std::result::Result<&[f64], RunError> {
    if cfg.schedule.is_empty() {
        return Err(cfg.missing("schedule", "by this pipeline").into());
    }
    Ok(&cfg.schedule)
}

/// Counted value of one histogram: the configured type, or the total.
fn selected(cfg: &ExperimentConfig, h: &TypeHistogram) -> u64 {
    match &cfg.type_key {
        Some(k) => h.counts.iter().find(|(key, _)| key.to_string() == *k).map_or(0, |(_, v)| *v),
        None => h.total(),
    }
}

fn series_json(s: &ConvergenceSeries) -> Value {
    json!({
        "points": s.points().iter().map(|(l, v)| json!({"L": l, "value": v})).collect::<Vec<_>>(),
        "estimate": s.last(),
        "stability": s.stability(),
    })
}

pub fn run(pipeline: Pipeline, cfg: &ExperimentConfig) -> std::result::Result<Output, RunError> {
    let model = build_model_by_id(&cfg.model)?;
    if let Some(p) = cfg.pipeline {
        if p != pipeline {
            return Err(crate::config::ConfigError {
                line: 0,
                field: "pipeline".into(),
                message: format!("config is for `{}`, command runs `{}`", p.name(), pipeline.name()),
            }
            .into());
        }
    }
    match pipeline {
        Pipeline::Enumerate => enumerate(cfg, &model),
        Pipeline::SimpleCount | Pipeline::Fit => count(cfg, &model, pipeline == Pipeline::Fit),
        Pipeline::Ratio => ratio(cfg, &model),
        Pipeline::Frequency => freq(cfg, &model),
        Pipeline::Tail => tail(cfg, &model),
        Pipeline::NonsimpleCount => nonsimple(cfg, &model),
        Pipeline::Validate => Ok(validate(cfg)),
    }
}

fn enumerate(cfg: &ExperimentConfig, model: &SurfaceModel) -> std::result::Result<Output, RunError> {
    let norm = required_norm(cfg, model)?;
    let l = *required_schedule(cfg)?.last().expect("nonempty");
    let ball = enumerate_ball(model, &norm, l)?;
    let n = ball.count();
    if n > cfg.point_cap {
        return Err(Error::BudgetExceeded { what: "enumerated points", cap: cfg.point_cap, partial_l: 0.0 }.into());
    }
    let mut csv = Vec::new();
    ball.write_csv(model, &mut csv)?;
    Ok(Output { csv: Some(csv), results: json!({"L": l, "norm": norm.name(), "points": n}), failed_checks: 0 })
}

fn count(cfg: &ExperimentConfig, model: &SurfaceModel, fit: bool) -> std::result::Result<Output, RunError> {
    let norm = required_norm(cfg, model)?;
    let hists = histogram_series(model, &norm, required_schedule(cfg)?, cfg.point_cap)?;
    let raw = series_of(&hists, |h| selected(cfg, h) as f64)?;
    let scaled = series_of(&hists, |h| selected(cfg, h) as f64 / h.l.powi(model.exponent as i32))?;
    let mut results = json!({
        "norm": norm.name(),
        "type": cfg.type_key.clone().unwrap_or_else(|| "total".into()),
        "exponent": model.exponent,
        "counts": series_json(&raw),
        "normalized": series_json(&scaled),
        "kappa": estimate_kappa(hists.last().expect("nonempty"), model.exponent),
    });
    if fit {
        let (slope, stderr) = fit_exponent(&raw)?;
        results["slope"] = json!({"value": slope, "stderr": stderr});
    }
    let csv = rows_to_csv(&Row::from_histograms(norm.name(), &hists));
    Ok(Output { csv: Some(csv), results, failed_checks: 0 })
}

fn ratio(cfg: &ExperimentConfig, model: &SurfaceModel) -> std::result::Result<Output, RunError> {
    let norm = required_norm(cfg, model)?;
    let n2 = cfg.norm2.as_ref().ok_or_else(|| cfg.missing("norm2", "by the ratio pipeline"))?;
    let norm2 = bind_norm(model, n2)?;
    let schedule = required_schedule(cfg)?;
    let h1 = histogram_series(model, &norm, schedule, cfg.point_cap)?;
    let h2 = histogram_series(model, &norm2, schedule, cfg.point_cap)?;
    let s1 = series_of(&h1, |h| selected(cfg, h) as f64)?;
    let s2 = series_of(&h2, |h| selected(cfg, h) as f64)?;
    let r = ratio_series(&s1, &s2)?;
    let (l1, l2) = (format!("1:{}", norm.name()), format!("2:{}", norm2.name()));
    let mut rows = Row::from_histograms(&l1, &h1);
    rows.extend(Row::from_histograms(&l2, &h2));
    let results = json!({
        "norms": [norm.name(), norm2.name()],
        "type": cfg.type_key.clone().unwrap_or_else(|| "total".into()),
        "ratio": series_json(&r),
    });
    Ok(Output { csv: Some(rows_to_csv(&rows)), results, failed_checks: 0 })
}

fn freq(cfg: &ExperimentConfig, model: &SurfaceModel) -> std::result::Result<Output, RunError> {
    let norm = required_norm(cfg, model)?;
    let hists = histogram_series(model, &norm, required_schedule(cfg)?, cfg.point_cap)?;
    let last = hists.last().expect("nonempty");
    let report = frequency_report(last)?;
    let fractions: BTreeMap<String, Value> = report
        .fractions
        .iter()
        .map(|(k, r)| (k.to_string(), json!({"exact": r.to_string(), "value": report.value(k)})))
        .collect();
    let results = json!({"norm": norm.name(), "L": last.l, "total": report.total, "fractions": fractions});
    Ok(Output { csv: Some(rows_to_csv(&Row::from_histograms(norm.name(), &hists))), results, failed_checks: 0 })
}

fn tail(cfg: &ExperimentConfig, model: &SurfaceModel) -> std::result::Result<Output, RunError> {
    let norm = required_norm(cfg, model)?;
    let hists = histogram_series(model, &norm, required_schedule(cfg)?, cfg.point_cap)?;
    let last = hists.last().expect("nonempty");
    let report = tail_report(last, cfg.epsilon)?;
    let results = json!({
        "norm": norm.name(),
        "L": last.l,
        "epsilon": cfg.epsilon,
        "keys": report.keys.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        "covered": report.covered,
    });
    Ok(Output { csv: Some(rows_to_csv(&Row::from_histograms(norm.name(), &hists))), results, failed_checks: 0 })
}

fn nonsimple(cfg: &ExperimentConfig, model: &SurfaceModel) -> std::result::Result<Output, RunError> {
    let seed_text = cfg.seed.as_deref().ok_or_else(|| cfg.missing("seed", "by the nonsimple pipeline"))?;
    let structure = match &cfg.norm {
        None => &cfg.structure,
        Some(NormConfig::Hyperbolic(s)) => s,
        Some(_) => {
            return Err(crate::config::ConfigError {
                line: 0,
                field: "norm".into(),
                message: "orbit counting needs `hyperbolic-length`".into(),
            }
            .into())
        }
    };
    let rep = bind_structure(model, structure)?;
    let schedule = required_schedule(cfg)?;
    let opts = OrbitOptions { margin: cfg.margin, node_cap: cfg.node_cap };
    let seed = parse_cyclic_word(model, seed_text)?;
    let simple = parse_cyclic_word(model, &cfg.simple_seed)?;
    let s_seed = count_orbit_nonsimple(model, &seed, &rep, schedule, opts)?;
    let s_simple = count_orbit_nonsimple(model, &simple, &rep, schedule, opts)?;
    let mut rows = Vec::new();
    for (w, s) in [(&seed, &s_seed), (&simple, &s_simple)] {
        for (l, v) in s.points() {
            rows.push(Row { series: "orbit".into(), l: *l, key: format!("orbit:{w}"), count: *v as u64 });
        }
    }
    let mut results = json!({
        "seed": seed.to_string(),
        "simple_seed": simple.to_string(),
        "margin": cfg.margin,
        "counts": series_json(&s_seed),
        "simple_counts": series_json(&s_simple),
        "ratio": series_json(&ratio_series(&s_seed, &s_simple)?),
    });
    if s_seed.len() >= 4 {
        let (slope, stderr) = fit_exponent(&s_seed)?;
        results["slope"] = json!({"value": slope, "stderr": stderr});
    }
    Ok(Output { csv: Some(rows_to_csv(&rows)), results, failed_checks: 0 })
}

fn check(name: &str, pass: bool, detail: String) -> Value {
    json!({"check": name, "pass": pass, "detail": detail})
}

/// Never fails as a whole; every problem becomes a failed entry.
pub fn validate(cfg: &ExperimentConfig) -> Output {
    let mut checks = Vec::new();
    let model = match build_model_by_id(&cfg.model) {
        Ok(m) => {
            checks.push(check("model-build", true, format!("{} rank {}", m.kind, m.rank())));
            m
        }
        Err(e) => {
            checks.push(check("model-build", false, e.to_string()));
            return finish(checks);
        }
    };

    match bind_structure(&model, &cfg.structure) {
        Ok(rep) => {
            let lengths = match cfg.structure {
                Structure::Genus2 { lengths, .. } => Some(lengths),
                Structure::Torus { .. } => None,
            };
            let res = rep.residuals(lengths);
            let tol = 1e-9;
            checks.push(check(
                "holonomy-relator",
                res.relator_residual < tol,
                format!("relator residual {:e}", res.relator_residual),
            ));
            checks.push(check(
                "holonomy-determinants",
                res.max_det_error < tol,
                format!("max |det - 1| {:e}", res.max_det_error),
            ));
            if !res.pants_length_residuals.is_empty() {
                let worst = res.pants_length_residuals.iter().fold(0.0f64, |a, b| a.max(*b));
                checks.push(check("holonomy-pants-lengths", worst < tol, format!("max residual {worst:e}")));
            }
        }
        Err(e) => {
            let name = match e {
                Error::TraceRelationViolated { .. } => "trace-relation",
                _ => "holonomy-construction",
            };
            checks.push(check(name, false, e.to_string()));
        }
    }

    let class =
        if model.relator.is_empty() { model.peripheral.clone().unwrap_or_default() } else { model.relator.clone() };
    for g in mcg_generators(&model) {
        let keeps = g.preserves_class_in_free_group(&class);
        let transvection = is_transvection(&abelianized_action(&model, &g));
        let inverse = g.inverse_is_consistent();
        checks.push(check(
            &format!("generator-{}", g.name),
            keeps && transvection && inverse,
            format!("fixes relator class {keeps}, transvection {transvection}, inverse consistent {inverse}"),
        ));
    }

    let (norm, top) = match model.kind {
        ModelKind::PuncturedTorus => (NormSpec::TorusDiamond, 20),
        ModelKind::GenusTwo => (NormSpec::DtL1, 6),
    };
    let schedule: Vec<f64> = (1..=top).map(f64::from).collect();
    match histogram_series(&model, &norm, &schedule, cfg.point_cap) {
        Ok(hists) => {
            let mut bad = Vec::new();
            for h in &hists {
                let ball = enumerate_ball(&model, &norm, h.l).map(|b| b.count()).unwrap_or(u64::MAX);
                let sum: u64 = h.counts.values().sum();
                let closed = match model.kind {
                    ModelKind::PuncturedTorus => (h.l as u64).pow(2) + h.l as u64 == sum,
                    ModelKind::GenusTwo => true,
                };
                if sum != ball || !closed {
                    bad.push(h.l);
                }
            }
            checks.push(check(
                "partition-identity",
                bad.is_empty(),
                format!("{} at L = 1..{top}, failures at {bad:?}", norm.name()),
            ));
        }
        Err(e) => checks.push(check("partition-identity", false, e.to_string())),
    }
    finish(checks)
}

fn finish(checks: Vec<Value>) -> Output {
    let failed = checks.iter().filter(|c| c["pass"] == json!(false)).count();
    Output { csv: None, results: json!({"checks": checks, "failed": failed}), failed_checks: failed }
}
