use std::process::Command;

use hydrenyi::cli::run_with;
use hydrenyi::entropy::parse_log_form;
use num_traits::{One, ToPrimitive};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["hydrenyi"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn total(records: &Value, space: &str) -> Value {
    records
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["space"] == space && r["part"] == "total")
        .cloned()
        .unwrap()
}

#[test]
fn ground_state_totals() {
    let records = json(&["compute", "D=3,n=1,mu=0,0,Z=1", "--q", "2", "--space", "both"]);
    assert_eq!(records.as_array().unwrap().len(), 6);
    let pos = total(&records, "position");
    let mom = total(&records, "momentum");
    assert_eq!(pos["exact"], "ln(8*pi)");
    assert_eq!(mom["exact"], "ln(16/33*pi^2)");
    assert_eq!(pos["provenance"], "closed-form");
    let expected = (8.0 * std::f64::consts::PI).ln();
    assert!((pos["value"].as_f64().unwrap() - expected).abs() < 1e-14);
}

#[test]
fn exact_strings_round_trip() {
    let records = json(&["compute", "D=4,n=3,mu=1,0,0,Z=2", "--q", "3", "--space", "both"]);
    for r in records.as_array().unwrap() {
        let exact = r["exact"].as_str().unwrap();
        let (c, arg) = parse_log_form(exact).unwrap();
        let rendered = if c.is_one() { format!("ln({arg})") } else { format!("{c}*ln({arg})") };
        assert_eq!(rendered, exact);
        let value = r["value"].as_f64().unwrap();
        let reparsed = c.to_f64().unwrap() * arg.to_f64().ln();
        assert!((reparsed - value).abs() <= 1e-12 * value.abs().max(1.0), "{exact}");
    }
}

#[test]
fn float_and_check_agree() {
    let checked = total(&json(&["compute", "D=3,n=2,mu=1,1,Z=1", "--q", "2", "--check"]), "position");
    assert_eq!(checked["residuals"]["oracle_exact_equal"], true, "{checked}");
    let float = total(&json(&["compute", "D=3,n=2,mu=1,1,Z=1", "--q", "2", "--float"]), "position");
    assert_eq!(float["provenance"], "oracle-float");
    let gap = checked["value"].as_f64().unwrap() - float["value"].as_f64().unwrap();
    assert!(gap.abs() < 1e-12, "{gap}");
}

#[test]
fn tables_are_deterministic() {
    for space in ["position", "momentum"] {
        let a = run(&["--format", "csv", "table", "--space", space]);
        let b = run(&["--format", "csv", "table", "--space", space]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        let lines: Vec<&str> = a.1.lines().collect();
        assert_eq!(lines[0], "space,n,l,m,exact,value");
        assert_eq!(lines.len(), 11);
    }
    let (_, out, _) = run(&["--format", "csv", "table", "--space", "momentum"]);
    assert!(out.contains("momentum,1,0,0,ln(16/33*pi^2),"));
}

#[test]
fn verify_passes_and_catches_fault() {
    let report = json(&["verify", "--dmax", "3", "--nmax", "2", "--summary"]);
    assert_eq!(report["all_equal"], true);
    assert_eq!(report["comparisons"], 36);

    let (code, out, _) = run(&["verify", "--dmax", "3", "--nmax", "3", "--summary", "--inject-fault"]);
    assert_eq!(code, 1);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["all_equal"], false);
    assert!(!report["failures"].as_array().unwrap().is_empty());
}

#[test]
fn uncertainty_sum_output() {
    let sum = json(&["sum", "D=3,n=1,mu=0,0,Z=1", "--q", "2"]);
    assert_eq!(sum["satisfied"], true);
    assert!((sum["bound"].as_f64().unwrap() - 4.728759).abs() < 1e-6);
    let s = sum["position"].as_f64().unwrap() + sum["momentum"].as_f64().unwrap();
    assert!((sum["sum"].as_f64().unwrap() - s).abs() < 1e-12);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["compute", "D=3,n=1,mu=5,0,Z=1", "--q", "2"]).0, 2);
    assert_eq!(run(&["compute", "D=3,n=1,mu=0,0,Z=1", "--q", "1.5"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn term_cap_exit_code() {
    let out = Command::new(env!("CARGO_BIN_EXE_hydrenyi"))
        .args(["compute", "D=3,n=3,mu=0,0,Z=1", "--q", "2"])
        .env("HYDRENYI_TERM_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}
