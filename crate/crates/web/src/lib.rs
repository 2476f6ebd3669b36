//! Browser bindings: each function takes a problem document as JSON text and
//! returns its result as JSON text.

use jagg_core::decomposition::{
    find_finest_independent_partition, find_iod, syntactic_partition, Decomposition,
};
use jagg_core::document::Problem;
use jagg_core::rules::{RuleId, TieBreaker};
use jagg_core::separability::{check_as_instance, check_oas_instance};
use jagg_core::{Agenda, Error, JudgmentSet};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn set_json(agenda: &Agenda, j: &JudgmentSet) -> Value {
    let formulas: Vec<String> = agenda.formulas_of(j).iter().map(|f| f.to_string()).collect();
    let signs: String = j.signs().iter().map(|s| s.symbol()).collect();
    json!({ "signs": signs, "formulas": formulas })
}

pub fn aggregate_json(doc: &str, rule: &str) -> Result<Value, Error> {
    let rule: RuleId = rule.parse()?;
    let problem = Problem::from_json(doc)?;
    let p = problem.profile()?;
    let outcome = rule.apply(p)?;
    let winner = TieBreaker::default().select(&outcome)?;
    Ok(json!({
        "rule": rule.name(),
        "outcome": outcome.iter().map(|j| set_json(p.agenda(), j)).collect::<Vec<_>>(),
        "winner": set_json(p.agenda(), &winner),
    }))
}

pub fn decompose_json(doc: &str, mode: &str) -> Result<Value, Error> {
    let problem = Problem::from_json(doc)?;
    let agenda = &problem.agenda;
    let found = match mode {
        "syntactic" => Some(syntactic_partition(agenda)?),
        "partition" => Some(find_finest_independent_partition(agenda)?),
        "iod" => find_iod(agenda)?,
        other => return Err(Error::Precondition(format!("unknown mode `{other}`"))),
    }
    .filter(|d| !d.is_trivial());
    Ok(match found {
        None => json!({ "mode": mode, "result": "trivial" }),
        Some(d) => json!({ "mode": mode, "result": "decomposed", "kind": d.kind(), "blocks": d.blocks() }),
    })
}

/// `blocks` is a comma-separated list of block names from the document.
pub fn check_json(doc: &str, property: &str, rule: &str, blocks: &str) -> Result<Value, Error> {
    let rule: RuleId = rule.parse()?;
    let problem = Problem::from_json(doc)?;
    let p = problem.profile()?;
    let blocks = blocks
        .split(',')
        .map(|name| problem.block(name.trim()).map(<[usize]>::to_vec))
        .collect::<Result<Vec<_>, _>>()?;
    let report = match (property, blocks.as_slice()) {
        ("as", _) => check_as_instance(&rule, p, &Decomposition::certify_partition(&problem.agenda, blocks.clone())?)?,
        ("oas", [b1, b2]) => check_oas_instance(&rule, p, &Decomposition::certify_iod(&problem.agenda, b1, b2)?)?,
        ("oas", _) => return Err(Error::Precondition("oas needs exactly two blocks".into())),
        (other, _) => return Err(Error::Precondition(format!("unknown property `{other}`"))),
    };
    Ok(serde_json::to_value(report).expect("reports serialize"))
}

fn to_js(r: Result<Value, Error>) -> Result<String, JsError> {
    r.map(|v| serde_json::to_string_pretty(&v).expect("values serialize"))
        .map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn aggregate(doc: &str, rule: &str) -> Result<String, JsError> {
    to_js(aggregate_json(doc, rule))
}

#[wasm_bindgen]
pub fn decompose(doc: &str, mode: &str) -> Result<String, JsError> {
    to_js(decompose_json(doc, mode))
}

#[wasm_bindgen]
pub fn check(doc: &str, property: &str, rule: &str, blocks: &str) -> Result<String, JsError> {
    to_js(check_json(doc, property, rule, blocks))
}
