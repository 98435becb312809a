use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn jetcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetcalc")).args(args).env_remove("JETCALC_SEED").output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn jet_of_square_over_dual_numbers() {
    let out = jetcalc(&["jet", "--module", &fixture("dual_module.json"), "--poly", "x1^2", "--point", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["matrices"], serde_json::json!([[["9", "6"], ["0", "9"]]]));
    assert_eq!(v["evaluation_points"], serde_json::json!([["3"]]));
}

#[test]
fn jet_of_constant_is_scalar() {
    let out = jetcalc(&["jet", "--module", "delorme:1;2", "--poly", "5", "--point", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let m = &stdout_json(&out)["matrices"][0];
    for r in 0..4 {
        for c in 0..4 {
            assert_eq!(m[r][c], if r == c { "5" } else { "0" });
        }
    }
}

#[test]
fn jet_of_exponential_keeps_formal_units() {
    let out = jetcalc(&["jet", "--module", "dual:1", "--poly", "exp[1]*(1)", "--point", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let m = &stdout_json(&out)["matrices"][0];
    assert_eq!(m, &serde_json::json!([["(1)*e^(2)", "(1)*e^(2)"], ["0", "(1)*e^(2)"]]));
}

#[test]
fn verify_is_deterministic() {
    let (a, b) = (tmp("det_a.jsonl"), tmp("det_b.jsonl"));
    for p in [&a, &b] {
        let out = jetcalc(&["verify", "--seed", "7", "--count", "2", "--json", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_jetcalc"));
        cmd.args(["verify", "--suite", "poly", "--count", "3"]).env_remove("JETCALC_SEED");
        if let Some(e) = env {
            cmd.env("JETCALC_SEED", e);
        }
        if let Some(s) = seed {
            cmd.args(["--seed", s]);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("11"), None), run(None, Some("11")));
    assert_ne!(run(Some("11"), None), run(Some("12"), None));
}

#[test]
fn verify_records_are_sorted_with_a_summary() {
    let out = jetcalc(&["verify", "--suite", "localmod", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let (summary, records) = lines.split_last().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["failed"], 0);
    assert_eq!(summary["total"], records.len());
    let keys: Vec<(String, String)> = records
        .iter()
        .map(|r| (r["check_id"].as_str().unwrap().into(), r["instance_digest"].as_str().unwrap().into()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(records.iter().all(|r| r["status"] == "pass" && r["property"].is_string()));
}

#[test]
fn zero_dimension_cap_runs_nothing() {
    let out = jetcalc(&["verify", "--dimmax", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total"], 0);
}

#[test]
fn usage_and_parse_errors_exit_with_two() {
    assert_eq!(jetcalc(&["verify", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(jetcalc(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(jetcalc(&["jet", "--module", "dual:1", "--poly", "x1^"]).status.code(), Some(2));
    let bad = tmp("bad_candidate.json");
    std::fs::write(&bad, "{\"nvars\": 1, \"reps\": [{\"label\": \"a\"}]}").unwrap();
    let fam = fixture("reducible_family.json");
    let out = jetcalc(&["pw", "--family", &fam, "--candidate", bad.to_str().unwrap(), "--points", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let words = fixture("word_candidate.json");
    let out = jetcalc(&["pw", "--family", &fam, "--candidate", &words, "--points", "x1"]);
    assert_eq!(out.status.code(), Some(2));
    let bad_seed = Command::new(env!("CARGO_BIN_EXE_jetcalc"))
        .args(["verify", "--count", "1"])
        .env("JETCALC_SEED", "many")
        .output()
        .unwrap();
    assert_eq!(bad_seed.status.code(), Some(2));
}

#[test]
fn word_candidate_is_a_member() {
    let out = jetcalc(&[
        "pw", "--family", &fixture("reducible_family.json"), "--candidate", &fixture("word_candidate.json"),
        "--module", "dual:1", "--points", "0;2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["unanimous"], true);
    assert_eq!(v["verdicts"], serde_json::json!({"annihilator": true, "algebra": true, "sharp": true}));
}

#[test]
fn escaping_candidate_fails_all_three_tests() {
    let out = jetcalc(&[
        "pw", "--family", &fixture("reducible_family.json"), "--candidate", &fixture("escaping_candidate.json"),
        "--points", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["unanimous"], true);
    assert_eq!(v["verdicts"], serde_json::json!({"annihilator": false, "algebra": false, "sharp": false}));
    assert!(v["witness"]["separating_functional"].is_array());
    assert!(v["witness"]["escaping_vector"].is_array());
}

#[test]
fn double_commutant_of_upper_triangular_matrices() {
    let out = jetcalc(&["dcomm", &fixture("upper_triangular_algebra.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["dims"], serde_json::json!({"image": 3, "sharp": 3, "end_zero": 4}));
}

#[test]
fn kernel_for_repeated_direction() {
    let out = jetcalc(&["kernel", "--lambdas", "1;1", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["kernel"], serde_json::json!(["(1)*x1^3"]));
}

#[test]
fn json_flag_writes_the_report() {
    let p = tmp("kernel.json");
    let out = jetcalc(&["kernel", "--lambdas", "1,0;0,1", "--degree", "2", "--json", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["check"], "kernel");
}

#[test]
fn demo_runs() {
    let out = jetcalc(&["demo"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[\"9\", \"6\"]"));
}
