//! Problem files and reports conform to the versioned schemas in `schemas/`.

use std::path::{Path, PathBuf};

use jsonschema::JSONSchema;
use serde_json::Value;
use wcomm_cli::{parse_problem, run_problem, Overrides};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn load(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn compile(name: &str) -> JSONSchema {
    let schema = load(root().join("schemas").join(name));
    JSONSchema::compile(&schema).expect("schema compiles")
}

fn assert_valid(schema: &JSONSchema, v: &Value, what: &str) {
    if let Err(errors) = schema.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{what} violates schema:\n{}", msgs.join("\n"));
    }
}

fn bundled() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(root().join("problems")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        out.push((name, std::fs::read_to_string(&path).unwrap()));
    }
    out.sort();
    out
}

#[test]
fn bundled_problems_match_problem_schema() {
    let schema = compile("problem.v1.json");
    for (name, src) in bundled() {
        let v: Value = serde_json::from_str(&src).unwrap();
        assert_valid(&schema, &v, &name);
    }
}

#[test]
fn reports_match_report_schema() {
    let schema = compile("report.v1.json");
    for (name, src) in bundled() {
        let p = parse_problem(&src, &Overrides::default()).unwrap();
        for timings in [false, true] {
            let out = run_problem(&p, &src, timings).unwrap();
            assert_valid(&schema, &out.report, &name);
        }
    }
}

#[test]
fn report_schema_rejects_drift() {
    let schema = compile("report.v1.json");
    let (_, src) = bundled().into_iter().find(|(n, _)| n.starts_with("twins")).unwrap();
    let p = parse_problem(&src, &Overrides::default()).unwrap();
    let mut v = run_problem(&p, &src, false).unwrap().report;
    v["result"]["extra"] = Value::Bool(true);
    assert!(!schema.is_valid(&v));
}
