//! Browser bindings: cover checks, expressions and minor tests.
//! Every entry point takes strings and returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use diskext::catalog;
use diskext::connectivity::is_weakly_4_connected;
use diskext::disk_system::classify_cover;
use diskext::enlarge::{parse_expression, validate, Op};
use diskext::graph_core::GraphDoc;
use diskext::minor::{check_witness, find_minor};
use diskext::{Cycle, Error, Graph, Label, Result};

/// A catalog name, or graph JSON text.
fn load(src: &str) -> Result<(String, Graph, Option<Vec<Cycle>>)> {
    let src = src.trim();
    if src.starts_with('{') {
        let doc = GraphDoc::from_json(src)?;
        return Ok((doc.name.clone(), doc.graph()?, doc.cycles()?));
    }
    let e = catalog::get(src)?;
    let disks = e.covers.first().map(|(_, c)| c.disks().to_vec());
    Ok((e.name, e.graph, disks))
}

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

pub fn check_value(src: &str) -> Result<Value> {
    let (name, g, disks) = load(src)?;
    let disks = disks.ok_or_else(|| Error::Input(format!("{name} carries no cover")))?;
    let c = classify_cover(&g, disks)?;
    Ok(json!({
        "name": name,
        "vertices": g.order(),
        "edges": g.size(),
        "classification": c.classification(),
        "failure": c.failure(),
        "chi": c.euler_characteristic(),
        "weakly_4_connected": is_weakly_4_connected(&g),
    }))
}

pub fn apply_value(expr: &str, validate_as: &str) -> Result<Value> {
    let e = parse_expression(expr)?;
    let (_, cover) = e.base_graph()?;
    let result = e.apply()?;
    let verdict = if validate_as.trim().is_empty() {
        Value::Null
    } else {
        let op: Op = validate_as.trim().parse()?;
        let cover = cover.ok_or_else(|| Error::Input(format!("{} carries no cover", e.base)))?;
        match validate(&cover, &e.steps, op) {
            Ok(_) => json!({ "valid": true, "op": op }),
            Err(err @ Error::Precondition { .. }) => json!({ "valid": false, "op": op, "reason": err.to_string() }),
            Err(err) => return Err(err),
        }
    };
    Ok(json!({
        "graph": GraphDoc::new(expr, &result, None),
        "validation": verdict,
    }))
}

pub fn minor_value(host: &str, pattern: &str, witness: &str) -> Result<Value> {
    let (_, h, _) = load(host)?;
    let (_, p, _) = load(pattern)?;
    if witness.trim().is_empty() {
        let m = find_minor(&h, &p)?;
        return Ok(json!({ "minor": m.is_some(), "witness": m.map(|m| m.witness()) }));
    }
    let sets = witness
        .split('|')
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse::<Label>().map_err(|_| Error::Input(format!("bad label `{x}`"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let chk = check_witness(&h, &p, &sets)?;
    Ok(json!({ "minor": chk.up_to_iso, "check": chk }))
}

/// Cover classification, chi and weak 4-connectivity.
#[wasm_bindgen]
pub fn check_cover(src: &str) -> String {
    respond(check_value(src))
}

/// Applies an expression such as `Q1*7(2,10)`; `validate_as` may be empty.
#[wasm_bindgen]
pub fn apply_expression(expr: &str, validate_as: &str) -> String {
    respond(apply_value(expr, validate_as))
}

/// Searches for a minor, or verifies `witness` branch sets `a,b|c|...`.
#[wasm_bindgen]
pub fn test_minor(host: &str, pattern: &str, witness: &str) -> String {
    respond(minor_value(host, pattern, witness))
}

#[wasm_bindgen]
pub fn catalog_names() -> String {
    json!(catalog::names()).to_string()
}
