use std::path::Path;
use std::process::{Command, Output};

use harmsum::formats::{read_json, to_json_string, VERIFY_CSV_HEADER};
use harmsum_core::construction::ConstructionPlan;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmsum")).current_dir(dir).args(args).output().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["construct", "build", "--weight", "pow:beta=1", "--out", "p.json"]).status.code(), Some(0));
    assert_eq!(run(d, &["construct", "build", "--weight", "exppow:gamma=1"]).status.code(), Some(1));
    assert_eq!(run(d, &["construct", "build", "--weight", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(d, &["construct", "build", "--weight", "pow:beta=1", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(run(d, &["weights", "analyze", "--weight", "pow:beta=1", "--jmax", "2"]).status.code(), Some(2));
    assert_eq!(run(d, &["blocks", "certify", "--dim", "2", "--p", "2", "--nmax", "6"]).status.code(), Some(0));
    assert_eq!(
        run(d, &["blocks", "certify", "--dim", "2", "--p", "2", "--nmax", "6", "--scale", "1.1"]).status.code(),
        Some(1)
    );
    assert_eq!(run(d, &["construct", "verify", "--plan", "missing.json"]).status.code(), Some(2));
}

#[test]
fn plan_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["construct", "build", "--weight", "pow:beta=2", "--out", "p.json"]);
    let text = std::fs::read_to_string(d.join("p.json")).unwrap();
    for key in ["\"A\"", "\"J\"", "\"Q\"", "\"C_pd\"", "\"T\""] {
        assert!(text.contains(key), "{key} missing");
    }
    let plan: ConstructionPlan = read_json(&d.join("p.json")).unwrap();
    assert_eq!(to_json_string(&plan).unwrap(), text);
}

#[test]
fn verify_csv_has_header_and_band_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["construct", "build", "--weight", "pow:beta=1", "--out", "p.json"]);
    let out = run(
        d,
        &["construct", "verify", "--plan", "p.json", "--radii", "2", "--dirs", "4", "--bands", "1", "--out", "v.csv"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(d.join("v.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), VERIFY_CSV_HEADER.join(","));
    // center batch plus J bands of band 0
    assert_eq!(lines.count(), (1 + 8) * 2 * 4);
}

#[test]
fn eval_prints_json() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["construct", "build", "--weight", "pow:beta=1", "--out", "p.json"]);
    let out = run(d, &["construct", "eval", "--plan", "p.json", "--one-minus-r-exp", "-10", "--turn", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}
