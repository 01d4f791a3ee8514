use std::process::{Command, Output};

use serde_json::Value;

fn zhu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zhu")).args(args).env("ZHU_THREADS", "1").output().expect("zhu runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn audited_circle_example() {
    let out = zhu(&["circle", "--model", "heisenberg", "--T", "2", "--n", "1/2", "--m", "1/2", "--u", "a[-1]|0>", "--v", "a[-1]|0>"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"], "a[-3]a[-1]|0> + 3/2 a[-2]a[-1]|0> + 3/8 a[-1]^2|0> + 3/128 |0>");
}

#[test]
fn star_is_silenced_by_the_congruence_gate() {
    let out = zhu(&["star", "--model", "heisenberg", "--T", "2", "--n", "0", "--m", "0", "--p", "0", "--u", "a[-1]|0>", "--v", "a[-1]|0>"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"], "0");
}

#[test]
fn theorem_instance_is_clean() {
    let out = zhu(&["verify-theorem", "--model", "heisenberg", "--T", "2", "--n", "1/2", "--m", "0", "--cutoff", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["summary"]["outcome"], "passed");
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["summary"]["undecided"], 0);
    assert!(report["summary"]["contained"].as_u64().unwrap() > 0);
}

#[test]
fn runs_are_byte_identical() {
    let args = ["eigencheck", "--n", "1/2", "--m", "1", "--cutoff", "3", "--certificates"];
    let (a, b) = (zhu(&args), zhu(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["certificates"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn undecided_membership_exits_one() {
    let out = zhu(&["member", "--n", "1/2", "--v", "a[-1]|0>", "--cutoff", "0", "--w-max", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["summary"]["outcome"], "undecided");
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        &["bogus"][..],
        &["circle", "--u", "L[-2]|0>", "--v", "a[-1]|0>"],
        &["circle", "--u", "a[2]|0>", "--v", "a[-1]|0>"],
        &["circle", "--n", "1/3", "--u", "a[-1]|0>", "--v", "a[-1]|0>"],
        &["circle", "--n", "-1/2", "--u", "a[-1]|0>", "--v", "a[-1]|0>"],
        &["omega", "--model", "virasoro"],
        &["modes", "--u", "a[-1]|0>"],
    ] {
        let out = zhu(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"model": "virasoro", "c": "1/2", "u": "L[-2]|0>", "v": "L[-2]|0>"}"#).unwrap();
    let out_path = dir.path().join("report.json");
    let out = zhu(&["star", "--config", cfg.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(report["result"], "L[-2]^2|0> + 2 L[-3]|0> + 2 L[-2]|0>");
}
