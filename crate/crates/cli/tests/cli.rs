use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlc")).args(args).env_remove("QLC_BUDGET_SECS").output().expect("qlc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn length_of_monomial_quotient() {
    let o = qlc(&["length", "--ring", "F3[x,y]", "--ideal", "x^2; x*y; y^3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn paper_alias_runs_the_dvr_example() {
    let o = qlc(&["paper", "run", "dvr"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("[pass]").count(), 3);
    assert!(out.contains("3/3 checks passed"));
}

#[test]
fn unit_is_not_in_a_proper_ideal() {
    let o = qlc(&["member", "--ring", "Q[x]", "--ideal", "x", "--poly", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn json_report_echoes_input_and_is_deterministic() {
    let args = ["gb", "--ring", "Q[x,y,z]", "--ideal", "x*y - z; y^2 - x*z", "--format", "json"];
    let a = qlc(&args);
    let b = qlc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["complete"], true);
    assert_eq!(v["input"]["gb"]["ideal"], "x*y - z; y^2 - x*z");
    assert!(v["result"]["basis"].as_array().unwrap().len() >= 2);
}

#[test]
fn dsl_errors_exit_2_and_show_the_span() {
    let o = qlc(&["member", "--ring", "Q[x]", "--ideal", "x", "--poly", "1 +* x"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("1 +* x"), "{err}");
    assert!(err.contains('^'), "{err}");
}

#[test]
fn unknown_variables_and_subcommands_are_usage_errors() {
    assert_eq!(qlc(&["member", "--ring", "Q[x]", "--ideal", "y", "--poly", "x"]).status.code(), Some(2));
    assert_eq!(qlc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qlc(&["lab", "run", "no_such_example"]).status.code(), Some(2));
}

#[test]
fn ideal_operations() {
    let cmp = qlc(&["compare", "--ring", "Q[x,y]", "--ideal", "x^2", "--other", "x"]);
    assert_eq!(stdout(&cmp).trim(), "subset");
    let colon = qlc(&["colon", "--ring", "Q[x,y]", "--ideal", "x^2*y", "--by", "x"]);
    assert_eq!(stdout(&colon).trim(), "(x*y)");
    let sat = qlc(&["colon", "--ring", "Q[x,y]", "--ideal", "x^3*y", "--by", "x", "--saturate"]);
    assert!(stdout(&sat).starts_with("(y)"));
    let meet = qlc(&["intersect", "--ring", "Q[x,y]", "--ideal", "x", "--other", "y"]);
    assert_eq!(stdout(&meet).trim(), "(x*y)");
}

fn write_cert(dir: &Path, generators: &str) -> String {
    let path = dir.join("cert.json");
    let body = format!(
        r#"{{"context": {{"kind": "module", "ring": "F2[x]", "summands": [{{"j": "x", "k": "x^4"}}]}},
            "ideal": "x^2", "generators": {generators}}}"#
    );
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn certificate_validation_sets_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_cert(dir.path(), r#"[["x^2"], ["x"]]"#);
    let o = qlc(&["ql", "validate", "--cert", &good]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("valid (2 factors)"));

    // x·x = x^2 is not in the zero submodule
    let bad = write_cert(dir.path(), r#"[["x"], ["x^2"]]"#);
    let o = qlc(&["ql", "validate", "--cert", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid at step 1"));
}

#[test]
fn exact_report_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let o = qlc(&["ql", "exact", "--ring", "F2[x]", "--ideal", "x^2", "--summand", "x | x^4", "--summand", "x | x^2"]
        .iter()
        .copied()
        .chain(["--format", "json", "--out", p])
        .collect::<Vec<_>>());
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["value"], 2);
    let o = qlc(&["ql", "validate", "--cert", p]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_failures_exit_1() {
    // over Q the minus sign breaks the displayed identities
    let o = qlc(&["lab", "run", "comparison", "--field", "Q", "--sign", "minus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn budget_exhaustion_exits_3_with_an_incomplete_report() {
    let o = Command::new(env!("CARGO_BIN_EXE_qlc"))
        .args(["content", "scan", "--ring", "F2[x,y,z]", "--params", "x; y; z", "--t-max", "12", "--format", "json"])
        .env("QLC_BUDGET_SECS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["complete"], false);
    assert_eq!(v["error"], "time budget exhausted");
}

#[test]
fn malformed_budget_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_qlc")).args(["lab", "list"]).env("QLC_BUDGET_SECS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn forcing_commands() {
    let build = qlc(&["force", "build", "--ring", "F2[x,y]", "--ideal", "x^2; y^2", "--target", "x*y"]);
    assert_eq!(build.status.code(), Some(0));
    assert!(stdout(&build).contains("Z1"));

    let table = qlc(&[
        "force",
        "tight-table",
        "--ring",
        "F7[x,y,z]/(x^3+y^3+z^3)",
        "--ideal",
        "x; y",
        "--target",
        "z^2",
        "--multiplier",
        "z",
        "--e-max",
        "2",
    ]);
    assert_eq!(stdout(&table).trim(), "multiplier z\ne=1 q=7: true\ne=2 q=49: true");

    let qseq =
        qlc(&["force", "qseq", "--ring", "F2[x,y]", "--ideal", "x^2; y^2", "--target", "x*y", "--params", "x; y"]);
    assert_eq!(qseq.status.code(), Some(0));
    assert!(stdout(&qseq).starts_with("verdict: disproved"));

    let lc = qlc(&["force", "lc-class", "--ring", "Q[x,y]", "--params", "x; y", "--k-max", "2"]);
    assert_eq!(stdout(&lc).trim(), "k=1: false\nk=2: false");
}

#[test]
fn help_texts_name_the_concepts() {
    let o = qlc(&["force", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let help = stdout(&o);
    assert!(help.contains("forcing algebra"));
    assert!(help.contains("Q-sequence"));
    let o = qlc(&["ql", "--help"]);
    assert!(stdout(&o).contains("quasilength"));
}
