use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spsym")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_volatile(mut v: Value) -> Value {
    let m = v.as_object_mut().unwrap();
    m.remove("timestamp");
    m.remove("cache");
    v
}

const SMALL_FLOW: [&str; 10] =
    ["flow", "--algebra", "sp_real:2", "--a", "ricci:1", "--samples", "200", "--steps", "30", "--seed"];

#[test]
fn report_passes_with_exit_zero() {
    let out = spsym(&["report", "--algebra", "sl_real:3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["command"], "report");
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        vec!["report", "--algebra", "xx:3"],
        vec!["flow", "--algebra", "sp_real:2"],
        vec!["curvature", "--algebra", "sp_real:2", "--tolerance", "0.5"],
        vec!["flow", "--algebra", "sp_real:2", "--a", "ricci:1", "--eps-sweep", "0.01"],
        vec!["curvature", "--algebra", "sp_real:3", "--budget-kernel", "2"],
        vec!["flow", "--algebra", "sp_real:2", "--a", "ricci:x"],
    ] {
        let out = spsym(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn failed_assertion_exits_one() {
    // no float check can meet a tolerance below the unit roundoff
    let mut args = SMALL_FLOW.to_vec();
    args.extend(["1", "--tolerance", "1e-20"]);
    let out = spsym(&args);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(false));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL conservation"));
}

#[test]
fn same_seed_gives_identical_reports() {
    let mut args = SMALL_FLOW.to_vec();
    args.push("7");
    let a = without_volatile(json(&spsym(&args)));
    let b = without_volatile(json(&spsym(&args)));
    assert_eq!(a, b);
    *args.last_mut().unwrap() = "8";
    let c = without_volatile(json(&spsym(&args)));
    assert_ne!(a, c);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = spsym(&["curvature", "--algebra", "sp_real:2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["blocks"][0]["data"]["dimK"], 3);
}

fn cache_status(dir: &Path) -> Value {
    let out = spsym(&["report", "--algebra", "g2_split", "--cache", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    json(&out)["cache"].clone()
}

#[test]
fn cache_is_filled_then_reused() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cache_status(dir.path()), "miss");
    assert_eq!(cache_status(dir.path()), "hit");
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, "{ not json").unwrap();
    assert!(cache_status(dir.path()).get("rebuilt").is_some());
    assert_eq!(cache_status(dir.path()), "hit");
}

#[test]
fn matrix_forms_bypass_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = spsym(&["report", "--algebra", "su:1,2", "--cache", dir.path().to_str().unwrap()]);
    assert_eq!(json(&out)["cache"], "not_applicable");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
