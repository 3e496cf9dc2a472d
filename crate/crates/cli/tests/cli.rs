//! End-to-end runs of the `wcomm` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn wcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcomm"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("spawn wcomm")
}

fn problems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn every_bundled_problem_runs_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(problems_dir()).unwrap() {
        let path = entry.unwrap().path();
        let file = path.to_str().unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        let o1 = wcomm(&["run", file, "--out", a.to_str().unwrap()]);
        assert!(o1.status.success(), "{file}: {}", stderr(&o1));
        let o2 = wcomm(&["--threads", "1", "run", file, "--out", b.to_str().unwrap()]);
        assert!(o2.status.success(), "{file}: {}", stderr(&o2));
        let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(ra, rb, "{file}: report differs between runs");
        let v: serde_json::Value = serde_json::from_slice(&ra).unwrap();
        assert_eq!(v["version"], 1);
        assert!(v.get("timings").is_none());
        seen += 1;
    }
    assert_eq!(seen, 7);
}

#[test]
fn timings_only_on_request() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let file = problems_dir().join("rootinfo-b3.json");
    let o = wcomm(&["run", file.to_str().unwrap(), "--timings", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    assert!(v["timings"]["totalMillis"].is_u64());
}

#[test]
fn malformed_rational_exits_2_with_line() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bad.json",
        r#"{
  "version": 1,
  "task": "weakcomm",
  "payload": {
    "group": "SL2",
    "left": [[["1/0", "1"], ["1", "1"]]],
    "right": [[["2", "1"], ["1", "1"]]]
  }
}
"#,
    );
    let o = wcomm(&["run", &f]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 6"), "{err}");
    assert!(err.contains("zero denominator"), "{err}");
}

#[test]
fn unknown_task_and_missing_file_exit_2() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t.json", "{\"version\": 1, \"task\": \"nope\", \"payload\": {}}\n");
    assert_eq!(wcomm(&["run", &f]).status.code(), Some(2));
    let missing = dir.path().join("absent.json");
    assert_eq!(wcomm(&["run", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn analysis_failure_exits_1() {
    let dir = TempDir::new().unwrap();
    // 1000003 * 1000033: both factors lie beyond the trial-division range.
    let f = write(
        &dir,
        "unf.json",
        r#"{"version": 1, "task": "twins",
 "payload": {"form": [1, 1, 1, -1, -1, -1, 1000036000099], "quaternion": [-1, -1]}}
"#,
    );
    let o = wcomm(&["run", &f]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn flag_overrides_file_option() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "w.json",
        r#"{"version": 1, "task": "weakcomm", "options": {"exponentBound": 3},
 "payload": {"group": "SL2", "left": [[[2, 1], [1, 1]]], "right": [[[5, 3], [3, 2]]]}}
"#,
    );
    let out = dir.path().join("r.json");
    let o = wcomm(&["run", &f, "--exponent-bound", "7", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    assert_eq!(v["options"]["exponentBound"], 7);
    assert_eq!(v["result"]["verdict"], "Yes");
}

#[test]
fn selftest_filter_behaviour() {
    let o = wcomm(&["selftest", "--filter", "weyl"]);
    assert!(o.status.success());
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("PASS"), "{out}");
    assert_eq!(out.lines().filter(|l| l.contains("PASS") || l.contains("FAIL")).count(), 1);

    let o = wcomm(&["selftest", "--filter", "no-such-check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("0 run"));
}

#[test]
fn no_color_output_is_plain() {
    let file = problems_dir().join("twins-split.json");
    let o = wcomm(&["run", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!o.stdout.contains(&0x1b));
}
