use std::path::Path;
use std::process::{Command, Output};

fn predopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_predopt")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = predopt(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn generate(dir: &Path, family: &str) -> (String, String) {
    let m = dir.join("model.json").to_string_lossy().into_owned();
    let p = dir.join("predictors.json").to_string_lossy().into_owned();
    ok(&["generate", "--students", "6", "--family", family, "--training-size", "2000", "--model-out", &m, "--predictors-out", &p]);
    (m, p)
}

#[test]
fn solve_then_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let (m, p) = generate(dir.path(), "logreg:5");
    let s = dir.path().join("solution.json").to_string_lossy().into_owned();
    ok(&["solve", "--model", &m, "--predictors", &p, "--delta", "5", "--out", &s]);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(doc["status"], "optimal");
    assert_eq!(doc["values"].as_object().unwrap().len(), 12);
    let report = ok(&["evaluate", "--solution", &s, "--model", &m, "--predictors", &p]);
    assert!(report.contains("feasible"), "{report}");
}

#[test]
fn evaluate_rejects_overspent_budget() {
    let dir = tempfile::tempdir().unwrap();
    let (m, p) = generate(dir.path(), "linreg");
    let s = dir.path().join("solution.json");
    let values: String = (0..6).map(|i| format!("\"x{i}\": 25000, ")).collect();
    std::fs::write(&s, format!("{{\"status\": \"optimal\", \"objective\": 1, \"bound\": 1, \"gap\": 0, \"values\": {{{}\"y0\": 0}}}}", values)).unwrap();
    let out = predopt(&["evaluate", "--solution", s.to_str().unwrap(), "--model", &m, "--predictors", &p]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("violation"));
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let (m, p) = generate(dir.path(), "logreg:4");
    let mps = ok(&["export", "--format", "mps", "--model", &m, "--predictors", &p, "--delta", "4"]);
    assert!(mps.starts_with("NAME") && mps.ends_with("ENDATA\n"));
    assert_eq!(mps.matches("'INTORG'").count(), mps.matches("'INTEND'").count());
    let out = dir.path().join("model.lp");
    ok(&["export", "--format", "lp", "--model", &m, "--predictors", &p, "--out", out.to_str().unwrap()]);
    let lp = std::fs::read_to_string(out).unwrap();
    assert!(lp.contains("Maximize") && lp.contains("Binary") && lp.trim_end().ends_with("End"));
}

#[test]
fn benchmark_csv() {
    let csv = ok(&["benchmark", "--families", "linreg", "--sizes", "5", "--trials", "2", "--training-size", "2000"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("family,params,N,trial,seed,status"));
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("LinReg,-,5,mean,,optimal=2/2"));
}

#[test]
fn bad_input_is_reported() {
    let out = predopt(&["solve", "--model", "/nonexistent/model.json", "--predictors", "/nonexistent/p.json"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/p.json"));
    let out = predopt(&["benchmark", "--families", "forest"]);
    assert!(!out.status.success());
}
