use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn nnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnc")).args(args).output().expect("nnc runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let out = nnc(&full);
    assert!(out.status.success(), "{args:?}: {}", stderr(&out));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    root.to_string_lossy().into_owned()
}

#[test]
fn velocity_superluminal() {
    let out = nnc(&["velocity", "--f", "power:n=3", "--b1", "0.9", "--b2", "0.9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("1.1339"), "{text}");
    assert!(text.contains("SUPERLUMINAL"));
    let v = json(&["velocity", "--f", "power:n=3", "--b1", "0.9", "--b2", "0.9"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["superluminal"], true);
    assert!((v["value"].as_f64().unwrap() - (2.0 * 0.9f64.powi(3)).cbrt()).abs() < 1e-15);
}

#[test]
fn entropy_domain_error() {
    let out = nnc(&["entropy", "--f", "exp", "--dist", "0.5,0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("EntropyDomainError"), "{err}");
    assert!(err.contains("-0.5"), "{err}");
    let out = nnc(&["entropy", "--f", "exp", "--dist", "0.5,0.5", "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "EntropyDomainError");
    assert_eq!(v["error"]["witness"]["argument"], -0.5);
}

#[test]
fn eval_add() {
    let out = nnc(&["eval", "--f", "identity", "--op", "add", "--a", "2", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "5");
}

#[test]
fn exit_status_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["eval", "--f", "power:n=3", "--op", "inverse", "--a", "0.729"], 0),
        (&["mean", "--average-speed", "30,60"], 0),
        (&["cosmo"], 0),
        (&["bell", "--classical-bound", "2"], 0),
        (&["velocity", "--b1", "1.5", "--b2", "0"], 1),
        (&["eval", "--f", "power:n=2", "--op", "forward", "--a", "1"], 1),
        (&["eval", "--f", "power;n=3", "--op", "forward", "--a", "1"], 1),
        (&["eval", "--f", "tanh", "--op", "add", "--a", "0.9", "--b", "0.9"], 1),
        (&["bell", "--model", "/nonexistent/model.json"], 1),
        (&["bell", "--classical-bound", "9"], 1),
        (&["cantor", "--x", "1.5"], 1),
        (&["frobnicate"], 2),
        (&["velocity", "--b1", "0.5"], 2),
        (&["velocity", "--b1", "0.5", "--b2", "0.5", "--bogus"], 2),
        (&["velocity", "--b1", "abc", "--b2", "0.5"], 2),
        (&["eval", "--f", "identity", "--op", "add", "--a", "1"], 2),
        (&["velocity", "--b1", "0.5", "--b2", "0.5", "--csv"], 2),
        (&["cantor"], 2),
        (&["cantor", "--samples", "1"], 2),
    ];
    for (args, code) in cases {
        let out = nnc(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}: {}", stderr(&out));
        if *code != 0 {
            assert!(!stderr(&out).contains("panicked"), "{args:?}");
        }
    }
}

#[test]
fn closure_error_carries_witness() {
    let out = nnc(&["eval", "--f", "tanh", "--op", "add", "--a", "0.9", "--b", "0.9", "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "ClosureError");
    assert_eq!(v["error"]["witness"]["a"], 0.9);
    assert!(v["error"]["witness"]["image"].as_f64().unwrap() > 1.0);
}

#[test]
fn rational_arguments() {
    let v = json(&["cantor", "--x", "1/4"]);
    assert!((v["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 2f64.powi(-46));
    let v = json(&["cantor", "--x", "1/3"]);
    assert_eq!(v["value"], 0.5);
    let v = json(&["velocity", "--b1", "1/2", "--b2", "-1/2"]);
    assert_eq!(v["value"], 0.0);
}

#[test]
fn cantor_csv() {
    let out = nnc(&["cantor", "--depth", "48", "--samples", "1001", "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,C(x)");
    assert_eq!(lines[1], "0,0");
    assert_eq!(*lines.last().unwrap(), "1,1");
    assert_eq!(lines.len(), 1002);
    assert!(lines.contains(&"0.5,0.5"));
    let values: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn cantor_csv_to_file() {
    let path = std::env::temp_dir().join(format!("nnc-cantor-{}.csv", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let out = nnc(&["cantor", "--samples", "11", "--out", &p]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("x,C(x)\n0,0\n"));
    assert!(text.ends_with("1,1\n"));
    let bad = nnc(&["cantor", "--samples", "11", "--out", "/nonexistent/dir/c.csv"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn bell_fixture() {
    let v = json(&["bell", "--model", &fixture("chsh_setting_dependent.json")]);
    assert_eq!(v["chsh"], 4.0);
    assert_eq!(v["independence"]["independent"], false);
    assert!(v["independence"]["max_distance"].as_f64().unwrap() > 0.5);
    let v = json(&["bell", "--model", &fixture("chsh_setting_independent.json")]);
    assert!(v["chsh"].as_f64().unwrap().abs() <= 2.0);
    assert_eq!(v["independence"]["independent"], true);
    let v = json(&["bell", "--classical-bound", "2"]);
    assert_eq!(v["bound"], 2.0);
}

#[test]
fn audit_json_is_deterministic() {
    let args = ["audit", "--f", "power:n=3", "--closure-samples", "300", "--cauchy-samples", "300", "--json"];
    let a = nnc(&args);
    let b = nnc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    let closure = &v["findings"][0];
    assert_eq!(closure["probe"], "closure");
    assert_eq!(closure["verdict"], "fail");
    assert_eq!(closure["witness"][0], serde_json::json!(["a", 0.9]));
}

#[test]
fn json_round_trips_into_the_library_report() {
    let out = nnc(&["audit", "--f", "arctanh", "--closure-samples", "200", "--cauchy-samples", "200", "--json"]);
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("verb");
    let report: nncalc::AuditReport = serde_json::from_value(v).unwrap();
    assert_eq!(report.bijection, "arctanh");
    assert_eq!(report.findings.len(), 5);
}

#[test]
fn derive_and_mean() {
    let v = json(&["derive", "--func", "square", "--x", "3"]);
    assert!((v["value"].as_f64().unwrap() - 6.0).abs() < 1e-6);
    assert_eq!(v["classification"], "converged");
    let v = json(&["derive", "--fx", "cantor", "--identity-check", "--grid", "0.1,0.3,0.5,0.7,0.9"]);
    assert_eq!(v["converged"], 0);
    assert_eq!(v["pass"], false);
    let v = json(&["eval", "--f", "cantor", "--op", "roundtrip", "--grid", "0.5"]);
    assert!((v["result"].as_f64().unwrap() - (0.5 - 1.0 / 3.0)).abs() < 1e-12);
    let v = json(&["mean", "--average-speed", "30,60"]);
    assert_eq!(v["average_speed"], 40.0);
    let v = json(&["mean", "--f", "reciprocal", "--values", "30,60"]);
    assert!((v["mean"].as_f64().unwrap() - 40.0).abs() < 1e-12);
}

#[test]
fn cosmo_defect() {
    let v = json(&["cosmo"]);
    assert!(v["defect"].as_f64().unwrap() < 1e-9);
    let v = json(&["cosmo", "--omega-lambda", "0.5", "--f", "sinh_cosmo:omega_lambda=0.7"]);
    assert!(v["defect"].as_f64().unwrap() > 0.01);
    let out = nnc(&["cosmo", "--n", "5", "--csv"]);
    assert_eq!(stdout(&out).lines().next(), Some("t,a,f,ratio"));
}
