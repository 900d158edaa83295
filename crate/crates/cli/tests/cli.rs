use std::process::{Command, Output};

use acceptcert_core::Report;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_acceptcert"));
    c.env_remove("ACCEPTCERT_MAX_CLOSURE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn list_shows_anchors() {
    let o = run(&["list"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("su4_mod_center") && s.contains("Example E:SU4"));
}

#[test]
fn list_json_is_an_array() {
    let o = run(&["list", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"crit_3a1"));
    assert_eq!(ids.len(), 9);
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(code(&run(&["list", "--frobnicate"])), 2);
    assert_eq!(code(&run(&[])), 2);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&run(&["verify", "su4_mod_center"])), 0);
    assert_eq!(code(&run(&["verify", "sp1_diag", "m=4", "eps=-1"])), 0);
    assert_eq!(code(&run(&["verify", "nonexistent"])), 2);
    assert_eq!(code(&run(&["verify", "sp1_diag", "m=2"])), 2);
    assert_eq!(code(&run(&["verify", "sp1_diag", "colour=red"])), 2);
    assert_eq!(code(&run(&["verify", "sp1_diag", "m"])), 2);
}

#[test]
fn closure_cap_failure_is_a_mismatch() {
    let o = run(&["verify", "crit_3a1", "--max-closure", "10"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("cap"));
    let o = bin().args(["verify", "crit_3a1"]).env("ACCEPTCERT_MAX_CLOSURE", "10").output().unwrap();
    assert_eq!(code(&o), 1);
    let o = bin().args(["list"]).env("ACCEPTCERT_MAX_CLOSURE", "lots").output().unwrap();
    assert_eq!(code(&o), 0);
    let o = bin().args(["verify", "su4_mod_center"]).env("ACCEPTCERT_MAX_CLOSURE", "lots").output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&["verify", "sp1_diag", "m=5", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let printed = stdout(&o);
    let r: Report = serde_json::from_str(&printed).unwrap();
    assert_eq!(serde_json::from_str::<Report>(&r.to_json()).unwrap(), r);
    let written: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, r);
    assert_eq!(r.schema, 1);
    assert_eq!(r.results[0].anchor, "Example E:Sp3-2");
    assert!(r.timing.is_some());
}

#[test]
fn scan_o_odd_fails_at_quarter_turns() {
    let o = run(&["scan-scf", "--family", "o-odd", "-n", "1", "--denominators", "4,6,8", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failing_angles"], serde_json::json!([[1, 4], [3, 4]]));
    assert_eq!(v["undecided"], 0);
}

#[test]
fn scan_so_odd_never_fails() {
    let o = run(&["scan-scf", "--family", "so-odd", "-n", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failing_angles"], serde_json::json!([]));
}

#[test]
fn scan_rejects_bad_input() {
    assert_eq!(code(&run(&["scan-scf", "--family", "o-odd", "-n", "0"])), 2);
    assert_eq!(code(&run(&["scan-scf", "--family", "sp-odd", "-n", "1"])), 2);
    assert_eq!(code(&run(&["scan-scf", "--family", "o-odd", "-n", "1", "--denominators", "0"])), 2);
}

#[test]
fn crit3a1_example_generators() {
    let o = run(&["crit3a1", &data("e3a1.json"), "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outcome"], "decided");
    assert_eq!(v["report"]["x_order"], 8);
    assert_eq!(v["report"]["y_order"], 16);
    assert_eq!(v["witness"]["element_conjugate"], true);
    assert_eq!(v["witness"]["globally_conjugate"], false);
}

#[test]
fn crit3a1_identity_not_applicable() {
    let o = run(&["crit3a1", &data("identity.json")]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("not applicable"));
}

#[test]
fn crit3a1_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"generators\": [").unwrap();
    assert_eq!(code(&run(&["crit3a1", bad.to_str().unwrap()])), 2);
    std::fs::write(&bad, "{\"generators\": [[{\"a\":{\"n\":1,\"c\":[\"2\"]},\"b\":{\"n\":1,\"c\":[\"0\"]},\"c\":{\"n\":1,\"c\":[\"0\"]},\"d\":{\"n\":1,\"c\":[\"0\"]}}]]}").unwrap();
    assert_eq!(code(&run(&["crit3a1", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["crit3a1", "/nonexistent/file.json"])), 2);
}

#[test]
fn run_all_with_filter_and_params() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("grid.json");
    std::fs::write(&p, r#"{"sp1_diag": [{"m": 9, "eps": -1}]}"#).unwrap();
    let o = run(&["run-all", "--filter", "sp1_*", "--params", p.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.summary.total, 1);
    assert_eq!(r.results[0].params["m"], 9.into());

    std::fs::write(&p, r#"{"nope": []}"#).unwrap();
    assert_eq!(code(&run(&["run-all", "--params", p.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["run-all", "--filter", "zzz*"])), 2);
}

#[test]
fn run_all_scf_is_deterministic() {
    let a: Report = serde_json::from_str(&stdout(&run(&["run-all", "--filter", "scf_*", "--json"]))).unwrap();
    let b: Report = serde_json::from_str(&stdout(&run(&["run-all", "--filter", "scf_*", "--json"]))).unwrap();
    assert_eq!(a.without_timing().to_json(), b.without_timing().to_json());
    assert!(a.passed());
}
