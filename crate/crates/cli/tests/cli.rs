use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    p.to_str().unwrap().to_string()
}

fn msml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msml")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn last_record(o: &Output) -> Value {
    records(o).pop().expect("at least one record")
}

#[test]
fn run_prints_final_memory() {
    let o = msml(&["--format", "json", "smc", "run", &fixture("pgm.smc")]);
    assert_eq!(code(&o), 0);
    let r = last_record(&o);
    assert_eq!(r["record"], "final");
    assert_eq!(r["memory"], serde_json::json!({ "i1": 1, "i2": 2, "m": 1 }));
    assert_eq!(r["stack"], serde_json::json!([]));
}

#[test]
fn stuck_program_exits_one() {
    let o = msml(&["smc", "run", &fixture("stuck.smc"), "--budget", "500"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn every_json_line_is_versioned() {
    let o = msml(&["--format", "json", "smc", "verify"]);
    assert_eq!(code(&o), 0);
    let rs = records(&o);
    assert!(rs.len() > 2);
    for r in &rs {
        assert_eq!(r["format_version"], msml::FORMAT_VERSION);
        assert!(r["record"].is_string());
    }
    assert_eq!(rs.last().unwrap()["ok"], true);
}

#[test]
fn bad_modus_ponens_names_the_step() {
    let o = msml(&[
        "--format", "json", "check-proof", "--sig", &fixture("unary.msig"), "--proof", &fixture("bad_mp.mpf"),
    ]);
    assert_eq!(code(&o), 1);
    let r = last_record(&o);
    assert_eq!(r["accepted"], false);
    assert_eq!(r["step"], 3);
}

#[test]
fn good_proofs_are_accepted() {
    for p in ["k.mpf", "global.mpf", "local.mpf"] {
        let o = msml(&["check-proof", "--sig", &fixture("unary.msig"), "--proof", &fixture(p)]);
        assert_eq!(code(&o), 0, "{p}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn enumerate_refutes_and_confirms() {
    let sig = fixture("unary.msig");
    let o = msml(&["--format", "json", "enumerate", "--sig", &sig, "--refute", "p -> [f](p)", "--max-worlds", "2"]);
    assert_eq!(code(&o), 1);
    let r = last_record(&o);
    assert_eq!(r["record"], "countermodel");
    assert!(r["model"].as_str().unwrap().contains("world"));

    let k = "[f](p -> q) -> [f](p) -> [f](q)";
    let o = msml(&["enumerate", "--sig", &sig, "--refute", k, "--max-worlds", "2"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn errors_exit_two() {
    let o = msml(&["--format", "json", "check-proof", "--sig", &fixture("unary.msig"), "--proof", "missing.mpf"]);
    assert_eq!(code(&o), 2);
    assert_eq!(last_record(&o)["record"], "error");

    let o = msml(&["model-check", "--sig", &fixture("unary.msig"), "--model", &fixture("chain.mmod"), "--formula", "p ->"]);
    assert_eq!(code(&o), 2);

    let o = msml(&["no-such-command"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn algebra_checks() {
    let sig = fixture("poly.msig");
    assert_eq!(code(&msml(&["bao-check", "--sig", &sig, "--algebra", &fixture("two.mba")])), 0);
    assert_eq!(code(&msml(&["jt", "--sig", &sig, "--algebra", &fixture("two.mba")])), 0);
    let o = msml(&["--format", "json", "bao-check", "--sig", &sig, "--algebra", &fixture("defect.mba")]);
    assert_eq!(code(&o), 1);
    assert_eq!(last_record(&o)["law"], "normality");
}

#[test]
fn output_is_deterministic_under_a_seed() {
    let args = ["--seed", "7", "--format", "json", "jt", "--sig", &fixture("poly.msig"), "--algebra", &fixture("two.mba")];
    let a = msml(&args);
    let b = msml(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn transforms_produce_checkable_proofs() {
    let sig = fixture("unary.msig");
    let out = std::env::temp_dir().join(format!("msml-globalize-{}.mpf", std::process::id()));
    let o = msml(&[
        "transform", "globalize", "--sig", &sig, "--proof", &fixture("global.mpf"), "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = msml(&["check-proof", "--sig", &sig, "--proof", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    std::fs::remove_file(out).unwrap();
}

#[test]
fn model_check_reports_worlds() {
    let o = msml(&[
        "--format", "json", "model-check", "--sig", &fixture("unary.msig"), "--model", &fixture("chain.mmod"),
        "--formula", "f(p)", "--world", "w0",
    ]);
    assert_eq!(code(&o), 0);
}
