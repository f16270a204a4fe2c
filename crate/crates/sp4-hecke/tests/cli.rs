use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sp4-hecke"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn gauss_report_passes_and_is_deterministic() {
    let args = ["verify", "--prime", "5", "--suite", "gauss"];
    let (code, first) = run(&args);
    assert_eq!(code, 0);
    let (_, second) = run(&args);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["config"]["prime"], 5);
    assert_eq!(v["summary"]["status"], "pass");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    for r in rows {
        for field in ["anchor", "computed", "expected", "abs_error", "pass"] {
            assert!(r.get(field).is_some(), "{field}");
        }
    }
}

#[test]
fn structure_report_at_three() {
    let (code, out) = run(&["verify", "--suite", "structure", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("anchor,computed,expected,abs_error,pass"));
    assert!(out.contains("\"f_δ*f_δ: coefficient of 1_χ, μ Legendre\",-9.000000,-9.000000"));

    let (_, out) = run(&[
        "verify",
        "--case",
        "gl2",
        "--mu",
        "trivial",
        "--suite",
        "structure",
        "--format",
        "csv",
    ]);
    assert!(out.contains("27.000000,27.000000"));
    assert!(out.contains("6.000000,6.000000"));
}

#[test]
fn subgroup_quotient_order() {
    let (code, out) = run(&["verify", "--prime", "3", "--suite", "subgroups"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let row = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["anchor"] == "|K⁺/K⁺⁺| = p⁶")
        .unwrap();
    assert_eq!(row["computed"], "729");
}

#[test]
fn failing_identities_exit_with_one() {
    // f_α squares to 1 against the closed form μ(-1) = -1 at p = 3
    let (code, out) = run(&["verify", "--case", "gl2", "--suite", "structure"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["status"], "fail");
    assert_eq!(v["summary"]["failed"], 2);
}

#[test]
fn levi_report() {
    let (code, out) = run(&["levi", "--max-rank", "2"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2]["computed"], "GL(2), GL(1)×Sp(2), Sp(4)");
    assert_eq!(rows[2]["pass"], true);
}

#[test]
fn writes_to_file_and_rejects_bad_input() {
    let dir = std::env::temp_dir().join(format!("sp4-hecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gauss.csv");
    let (code, out) = run(&[
        "verify",
        "--suite",
        "gauss",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .contains("G_δ = ζ - ζ², p = 3"));
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(run(&["verify", "--prime", "9"]).0, 1);
    assert_eq!(run(&["verify", "--length-bound", "7"]).0, 1);
}
