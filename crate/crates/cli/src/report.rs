//! JSON form of harness reports.

use serde_json::{json, Map, Value};
use ttocheck_core::harness::{Expect, Instance, Report, Residual, TrialConfig, Witness};

use crate::json::{complex_list, matrix};

fn residual_map(residuals: &[Residual]) -> Value {
    Value::Object(residuals.iter().map(|r| (r.name.clone(), json!(r.value))).collect::<Map<_, _>>())
}

fn expect_str(e: Expect) -> &'static str {
    match e {
        Expect::Zero => "zero",
        Expect::Positive => "positive",
        Expect::Info => "info",
    }
}

/// Per-residual bands, for residuals whose band differs from the config.
fn bands(residuals: &[Residual], cfg: &TrialConfig) -> Value {
    Value::Object(
        residuals
            .iter()
            .filter(|r| r.tolerance_pass != cfg.tolerance_pass || r.tolerance_fail != cfg.tolerance_fail)
            .map(|r| {
                (
                    r.name.clone(),
                    json!({"expect": expect_str(r.expect), "pass": r.tolerance_pass, "fail": r.tolerance_fail}),
                )
            })
            .collect::<Map<_, _>>(),
    )
}

fn expectations(residuals: &[Residual]) -> Value {
    Value::Object(
        residuals
            .iter()
            .filter(|r| r.expect != Expect::Zero)
            .map(|r| (r.name.clone(), json!(expect_str(r.expect))))
            .collect::<Map<_, _>>(),
    )
}

pub fn config(cfg: &TrialConfig) -> Value {
    json!({
        "seed": cfg.seed,
        "trials": cfg.trials,
        "degree_range": [cfg.degree_range.0, cfg.degree_range.1],
        "zero_modulus_cap": cfg.zero_modulus_cap,
        "tolerance_pass": cfg.tolerance_pass,
        "tolerance_fail": cfg.tolerance_fail,
    })
}

fn instance(i: &Instance) -> Value {
    json!({"label": i.label, "dim": i.dim, "zeros": complex_list(&i.zeros)})
}

fn witness(w: &Witness) -> Value {
    json!({
        "description": w.description,
        "instance": instance(&w.instance),
        "basis": w.matrix.as_ref().map(|(tag, _)| tag.as_str()),
        "entries": w.matrix.as_ref().map(|(_, m)| matrix(m)),
        "residuals": residual_map(&w.residuals),
    })
}

pub fn report(r: &Report) -> Value {
    let trials: Vec<Value> = r
        .trials
        .iter()
        .map(|t| {
            json!({
                "index": t.index,
                "instance": instance(&t.instance),
                "residuals": residual_map(&t.residuals),
                "verdict": t.verdict.as_str(),
            })
        })
        .collect();
    let (pass, fail, inconclusive) = r.counts();
    let all: Vec<Residual> = r
        .trials
        .first()
        .map(|t| t.residuals.clone())
        .unwrap_or_default()
        .into_iter()
        .chain(r.summary.iter().cloned())
        .collect();
    json!({
        "name": r.name,
        "config": config(&r.config),
        "expectations": expectations(&all),
        "bands": bands(&all, &r.config),
        "trials": trials,
        "counts": {"pass": pass, "fail": fail, "inconclusive": inconclusive},
        "summary": residual_map(&r.summary),
        "witness": r.witness.as_ref().map(witness),
        "verdict": r.verdict.as_str(),
    })
}
