use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn tsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsd")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    let last = text.lines().last().expect("report line");
    serde_json::from_str(last).expect("JSON report")
}

#[test]
fn empty_reports_core() {
    let out = tsd(&["empty", &fixture("swap_identity.shift.json")]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["result"]["empty"], false);
    assert_eq!(r["result"]["core"], serde_json::json!(["0", "1"]));
    assert_eq!(r["fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn entropy_emits_csv_then_summary() {
    let out = tsd(&["entropy", &fixture("irreducible_zero.shift.json"), "--max-height", "20"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,L_n,e_n");
    assert_eq!(lines.len(), 22);
    let r = report(&out);
    assert!(r["result"]["estimate"].as_f64().unwrap().abs() < 0.02);
}

#[test]
fn ubg_refutation_for_forbidden_constant_cells() {
    let out = tsd(&["check", &fixture("no_constant_cells.shift.json"), "--property", "ubg", "--cpc-leaves", "64", "--height", "3"]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["result"]["status"], "REFUTED");
    let ce = &r["result"]["counterexample"];
    let mut us: Vec<&str> = vec![ce["u"].as_str().unwrap()];
    us.extend(ce["others"].as_array().unwrap().iter().map(|o| o["u"].as_str().unwrap()));
    assert!(us.contains(&"(0,1,0)"), "{us:?}");
    assert_eq!(r["bounds"]["cpc_leaves"], 64);
}

#[test]
fn strict_mode_and_exit_codes() {
    // a tiny closure cap leaves the swap shift undecided
    let args = ["check", &fixture("irreducible_zero.shift.json"), "--property", "bg", "--closure-cap", "0", "--cpc-leaves", "3"];
    let lax = tsd(&args);
    assert!(lax.status.success());
    assert_eq!(report(&lax)["result"]["status"], "UNKNOWN");
    let mut strict = vec!["--strict"];
    strict.extend(args);
    assert_eq!(tsd(&strict).status.code(), Some(2));
    assert_eq!(tsd(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(tsd(&["empty", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(tsd(&["check", &fixture("no_constant_cells.shift.json"), "--property", "xyz"]).status.code(), Some(1));
}

#[test]
fn validate_round_trip_is_idempotent() {
    let dir = std::env::temp_dir().join(format!("tsd-validate-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["golden.shift.json", "even.shift.json", "no_constant_cells.shift.json", "u010.pattern.json", "p3.cpc.json"] {
        let first = tsd(&["validate", "--emit", &fixture(name)]);
        assert!(first.status.success(), "{name}");
        let path = dir.join(name);
        std::fs::write(&path, &first.stdout).unwrap();
        let second = tsd(&["validate", "--emit", path.to_str().unwrap()]);
        assert_eq!(first.stdout, second.stdout, "{name}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn glue_periodic_and_certificate() {
    let g = tsd(&["glue", &fixture("no_constant_cells.shift.json"), &fixture("u010.pattern.json"), &fixture("u010.pattern.json"), &fixture("p3.cpc.json")]);
    assert_eq!(report(&g)["result"]["connected"], true);
    let g = tsd(&["glue", &fixture("no_constant_cells.shift.json"), &fixture("u010.pattern.json"), &fixture("u010.pattern.json"), &fixture("sigma2.cpc.json")]);
    assert_eq!(report(&g)["result"]["connected"], false);
    let p = report(&tsd(&["periodic", &fixture("swap_identity.shift.json"), "--max-leaves", "8"]));
    assert_eq!(p["result"]["found"], false);
    assert_eq!(p["result"]["codes_tried"], 625);
    let p = report(&tsd(&["periodic", &fixture("golden.shift.json"), "--max-leaves", "4"]));
    assert_eq!(p["result"]["spec"]["interior"][""], "0");
    assert_eq!(p["result"]["replay_ok"], true);
    let c = report(&tsd(&["aperiodic-cert", &fixture("swap_identity.shift.json")]));
    assert_eq!(c["result"]["aperiodic"], true);
}

#[test]
fn blocks_extend_recode_factor() {
    let b = report(&tsd(&["blocks", &fixture("golden.shift.json"), "--height", "3", "--list"]));
    assert_eq!(b["result"]["total"], "9");
    assert_eq!(b["result"]["blocks"].as_array().unwrap().len(), 9);
    // a 1 above a 1 is not locally admissible in the golden mean shift
    let e = tsd(&["extend", &fixture("golden.shift.json"), &fixture("path11.pattern.json"), "--height", "3"]);
    assert_eq!(e.status.code(), Some(1));
    let e = report(&tsd(&["extend", &fixture("golden.shift.json"), &fixture("single0.pattern.json"), "--height", "3"]));
    assert!(e["result"].is_object());
    let r = report(&tsd(&["recode", &fixture("golden.shift.json")]));
    assert_eq!(r["result"]["symbols"], serde_json::json!(["(0,0,0)", "(0,1,1)", "(1,0,0)"]));
    let f = report(&tsd(&["factor", &fixture("even.shift.json"), "--height", "1"]));
    assert_eq!(f["result"]["blocks"], serde_json::json!(["0", "1"]));
    let h = report(&tsd(&["hierarchy", &fixture("golden.shift.json"), "--height", "3"]));
    assert!(h["result"]["violations"].as_array().unwrap().is_empty());
}
