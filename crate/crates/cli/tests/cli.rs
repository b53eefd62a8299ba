use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ekchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a json document")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn orders(v: &Value) -> Vec<u64> {
    v["witnesses"][0]["data"]["orders"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect()
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn ekchain_s3_transposition() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "s3.grp", "degree: 3\n(0 1)\n(0 1 2)\n");
    let h = write(dir.path(), "h.grp", "# a transposition\ndegree: 3\n(0 1)\n");
    let out = ekchain(&["ekchain", &g, &h, "--kmax", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(orders(&v), vec![6, 2, 2, 2]);
    assert_eq!(v["witnesses"][0]["data"]["guaranteed_stable"], true);
    assert_eq!(v["witnesses"][0]["data"]["subgroup_class"], 1);
}

#[test]
fn ekchain_dihedral_rotation_and_whole_group() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "d8.grp", "degree: 4\n(0 1 2 3)\n(1 3)\n");
    let r = write(dir.path(), "r.grp", "degree: 4\n(0 1 2 3)\n");
    let out = ekchain(&["ekchain", &g, &r, "--kmax", "3", "--format", "json"]);
    assert_eq!(orders(&json(&out)), vec![8, 4, 4, 4]);
    let out = ekchain(&["ekchain", &g, &g, "--kmax", "4", "--format", "json"]);
    assert_eq!(orders(&json(&out)), vec![8; 5]);
}

#[test]
fn ekchain_default_kmax_for_non_nilpotent() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "s4.grp", "degree: 4\n(0 1)\n(0 1 2 3)\n");
    let out = ekchain(&["ekchain", &g, &g, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    // 2 * ceil(log2 24) + 2 = 12
    assert_eq!(orders(&json(&out)).len(), 13);
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.grp", "degree: 3\n(0 1)\n\n(0 5)\n");
    let h = write(dir.path(), "h.grp", "degree: 3\n(0 1)\n");
    let out = ekchain(&["ekchain", &g, &h]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn subgroup_outside_group_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "a.grp", "degree: 4\n(0 1 2)\n(0 1)(2 3)\n");
    let h = write(dir.path(), "h.grp", "degree: 4\n(0 1)\n");
    assert_eq!(ekchain(&["ekchain", &g, &h]).status.code(), Some(2));
    let h = write(dir.path(), "h3.grp", "degree: 3\n(0 1 2)\n");
    assert_eq!(ekchain(&["ekchain", &g, &h]).status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "s4.grp", "degree: 4\n(0 1)\n(0 1 2 3)\n");
    let out = ekchain(&["ekchain", &g, &g, "--cap", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let out = ekchain(&["verify", "--cap", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ekchain(&["counterexample", "--levels", "1"]).status.code(), Some(2));
    assert_eq!(ekchain(&["counterexample", "--oracle-depth", "9"]).status.code(), Some(2));
    assert_eq!(ekchain(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(ekchain(&["verify", "--group", "Nope"]).status.code(), Some(2));
    assert_eq!(ekchain(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "all", "--group", "D8", "--group", "S3", "--format", "json-like"];
    let a = ekchain(&args);
    let b = ekchain(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_timings(json(&a)), without_timings(json(&b)));
    let v = json(&a);
    for key in ["tool_version", "command", "checks", "witnesses", "timings"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    assert!(checks[0]["scope"].as_str().unwrap().starts_with("D8 "));
}

#[test]
fn text_and_json_carry_the_same_checks() {
    let j = json(&ekchain(&["verify", "--suite", "bryant", "--group", "Q8", "--format", "json"]));
    let t = String::from_utf8(ekchain(&["verify", "--suite", "bryant", "--group", "Q8"]).stdout).unwrap();
    let n = j["checks"].as_array().unwrap().len();
    let lines = t
        .lines()
        .filter(|l| l.starts_with("  PASS") || l.starts_with("  FAIL") || l.starts_with("  SKIPPED"))
        .count();
    assert_eq!(n, lines);
}

#[test]
fn catalog_dir_overrides_builtins() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c6.grp", "degree: 6\n(0 1 2 3 4 5)\n");
    write(dir.path(), "notes.txt", "ignored\n");
    let d = dir.path().display().to_string();
    let out = ekchain(&["verify", "--catalog-dir", &d, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let groups: Vec<&str> = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["scope"].as_str().unwrap())
        .collect();
    assert_eq!(groups, vec!["c6"]);
    assert_eq!(v["witnesses"][0]["data"]["subgroups"], 4);
}

#[test]
fn counterexample_two_levels() {
    let out = ekchain(&["counterexample", "--levels", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let w = v["witnesses"].as_array().unwrap();
    let sizes: Vec<u64> = w
        .iter()
        .filter(|w| w["kind"] == "level")
        .map(|w| w["data"]["size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, vec![2, 4]);
    let d = w.iter().find(|w| w["kind"] == "descent").unwrap();
    assert_eq!(d["scope"], "k=0");
    assert_eq!(d["data"]["commutator"], "(0 1)(2 3)");
    assert_eq!(d["data"]["g"], "(0 2)(1 3)");
    assert_eq!(d["data"]["h"], "|0110");
}

#[test]
fn counterexample_over_budget_reports_partially() {
    let out = ekchain(&["counterexample", "--levels", "8", "--cell-budget", "1024", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    let levels = v["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|w| w["kind"] == "level")
        .count();
    assert_eq!(levels, 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("level 6"));
}
