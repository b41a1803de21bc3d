use std::path::PathBuf;
use std::process::{Command, Output};

use diskext::catalog;
use diskext::enlarge::{apply_steps, parse_steps};
use diskext::graph_core::GraphDoc;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskext")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("diskext-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn check_reports_the_cover() {
    let (c, v) = json(&["check", "petersen"]);
    assert_eq!(c, 0);
    assert_eq!(v["classification"], "disk_system");
    assert_eq!(v["chi"], 1);
    assert_eq!(v["weakly_4_connected"], true);
}

#[test]
fn check_fails_on_a_broken_cover() {
    let mut doc: Value = serde_json::from_str(&GraphDoc::new("p", &catalog::petersen(), Some(&catalog::disks_d())).to_json()).unwrap();
    doc["disks"].as_array_mut().unwrap().pop();
    let p = scratch("broken.json", &doc.to_string());
    assert_eq!(code(&["check", p.to_str().unwrap()]), 1);
    let looped = scratch("loop.json", r#"{"name":"x","vertices":[1,2],"edges":[[1,1]]}"#);
    assert_eq!(code(&["check", looped.to_str().unwrap()]), 2);
}

#[test]
fn apply_output_round_trips() {
    let (c, v) = json(&["apply", "petersen", "+(2,4,6)", "--validate-as", "triad"]);
    assert_eq!(c, 0);
    let doc = GraphDoc::from_json(&v.to_string()).unwrap();
    let want = apply_steps(&catalog::petersen(), &parse_steps("+(2,4,6)").unwrap()).unwrap();
    assert_eq!(doc.graph().unwrap(), want);
    assert_eq!(code(&["apply", "q3", "*1(2,5)", "--validate-as", "ncsplit"]), 0);
    assert_eq!(code(&["apply", "q3", "*1(5,6)", "--validate-as", "ncsplit"]), 1);
    assert_eq!(code(&["apply", "q1", "+(2,x)"]), 2);
}

#[test]
fn catalog_entries_round_trip_through_files() {
    let out = run(&["catalog", "q1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let doc = GraphDoc::from_json(&text).unwrap();
    assert_eq!(doc.graph().unwrap(), catalog::q1());
    let p = scratch("q1.json", &text);
    assert_eq!(code(&["iso", p.to_str().unwrap(), "q1"]), 0);
    assert_eq!(code(&["check", p.to_str().unwrap()]), 0);
}

#[test]
fn minor_and_iso_exit_codes() {
    assert_eq!(code(&["minor", "q2", "e18", "--witness", "1,5|3,8|7,9|2|4|6|10|11"]), 0);
    assert_eq!(code(&["minor", "q2", "e18"]), 0);
    assert_eq!(code(&["minor", "prism", "k33"]), 1);
    let (c, v) = json(&["iso", "prism", "k33"]);
    assert_eq!((c, v["isomorphic"].clone()), (1, Value::Bool(false)));
}

#[test]
fn enumerate_counts_classes() {
    let (c, v) = json(&["enumerate", "prism", "--op", "10"]);
    assert_eq!(c, 0);
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    let (_, v) = json(&["enumerate", "petersen", "--op", "jump"]);
    assert!(v["classes"].as_array().unwrap().is_empty());
    assert_eq!(code(&["enumerate", "petersen", "--op", "11"]), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["check", "nosuch"]), 2);
}

#[test]
fn verify_tables_is_deterministic() {
    let a = run(&["--json", "verify-tables", "--no-analysis"]);
    let b = run(&["--json", "verify-tables", "--no-analysis"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(!v["findings"].as_array().unwrap().is_empty());
}
