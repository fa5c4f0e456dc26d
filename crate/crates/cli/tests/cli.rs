use std::path::Path;
use std::process::{Command, Output};

use innerkit_cli::{Report, Status};

fn innerkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_innerkit")).args(args).output().expect("spawn innerkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn suite_reports_are_deterministic() {
    for suite in ["lemma-identities", "covering"] {
        let args = ["suite", suite, "--cases", "3", "--seed", "7", "--grid-q", "9"];
        let (a, b) = (innerkit(&args), innerkit(&args));
        assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
        assert!(String::from_utf8_lossy(&a.stderr).contains("seed: 7"));
    }
}

#[test]
fn seed_changes_random_cases() {
    let a = stdout(&innerkit(&["suite", "lemma-identities", "--cases", "2", "--seed", "1"]));
    let b = stdout(&innerkit(&["suite", "lemma-identities", "--cases", "2", "--seed", "2"]));
    assert_ne!(a, b);
}

#[test]
fn matrix_sweep_passes() {
    let o = innerkit(&["suite", "matrix-sweep"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!((r.status, r.summary.fail), (Status::Pass, 0));
    assert!(r.checks.iter().any(|c| c.name == "det M(3,4) = 1/144" && c.status == Status::Pass));
}

#[test]
fn dichotomy_suite() {
    let o = innerkit(&["suite", "dichotomy"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    let max = r.checks.iter().find(|c| c.name.starts_with("spiral max")).unwrap();
    assert!(max.value.unwrap() > 1e6);
}

#[test]
fn failing_check_sets_exit_code() {
    // three points leave a single interior ratio, far below 1e6
    let o = innerkit(&["suite", "dichotomy", "--J", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(r.summary.fail > 0);
    assert!(r.checks.iter().filter(|c| c.status == Status::Fail).all(|c| c.witness.is_some()));
}

#[test]
fn invalid_sequence_parameters_exit_before_running() {
    let o = innerkit(&["suite", "dichotomy", "--a", "0.75", "--b", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn empty_corpus_is_vacuous() {
    let o = innerkit(&["suite", "lemma-identities", "--cases", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert!(r.checks.is_empty());
    assert_eq!(r.status, Status::Info);
}

#[test]
fn unknown_inputs_are_usage_errors() {
    assert_eq!(innerkit(&["suite", "nope"]).status.code(), Some(2));
    assert_eq!(innerkit(&["gen", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(innerkit(&["gen", "--seq", "zigzag"]).status.code(), Some(2));
    assert_eq!(innerkit(&["gen", "--eps", "2"]).status.code(), Some(2));
}

#[test]
fn report_files_round_trip_through_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let o = innerkit(&["suite", "matrix-sweep", "--n", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let json_path = out.join("matrix-sweep.json");
    let original = Report::from_json(&std::fs::read_to_string(&json_path).unwrap()).unwrap();

    let again = dir.path().join("again.json");
    let o = innerkit(&["export", "--report", json_path.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(Report::from_json(&std::fs::read_to_string(&again).unwrap()).unwrap(), original);

    let csv = std::fs::read_to_string(out.join("matrix-sweep.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("name,status,value,gate,witness"));
    assert_eq!(csv.lines().count(), original.checks.len() + 1);
    let exported = stdout(&innerkit(&["export", "--report", json_path.to_str().unwrap(), "--format", "csv"]));
    assert_eq!(exported, csv);
}

#[test]
fn geometry_csv_header() {
    let o = innerkit(&["geom", "--seq", "radial", "--a", "0.5", "--J", "6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("j,|z_j|,1-|z_j|,d_j,ratio,edge_flag"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seq": "radial", "a": 0.5, "J": 4}"#).unwrap();
    let from_file = stdout(&innerkit(&["gen", "--config", cfg.to_str().unwrap(), "--format", "csv"]));
    assert_eq!(from_file.lines().count(), 5);
    let flagged = stdout(&innerkit(&["gen", "--config", cfg.to_str().unwrap(), "--J", "2", "--format", "csv"]));
    assert_eq!(flagged.lines().count(), 3);
    assert!(flagged.contains("2,0.75,0,0.25"));

    std::fs::write(&cfg, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(innerkit(&["gen", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let echoed = stdout(&innerkit(&["suite", "dichotomy", "--config", write_cfg(dir.path(), r#"{"J": 25}"#).as_str()]));
    assert_eq!(Report::from_json(&echoed).unwrap().config.j, 25);
}

fn write_cfg(dir: &Path, body: &str) -> String {
    let p = dir.join("echo.json");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn custom_sequence_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let seq_json = stdout(&innerkit(&["gen", "--seq", "radial", "--a", "0.5", "--J", "5"]));
    let path = dir.path().join("seq.json");
    std::fs::write(&path, &seq_json).unwrap();
    let a = stdout(&innerkit(&["geom", "--seq", "radial", "--a", "0.5", "--J", "5", "--format", "csv"]));
    let b = stdout(&innerkit(&["geom", "--seq", "custom", "--input", path.to_str().unwrap(), "--format", "csv"]));
    assert_eq!(a, b);
    assert_eq!(innerkit(&["geom", "--seq", "custom"]).status.code(), Some(2));
}

#[test]
fn matrix_hand_case() {
    let o = innerkit(&["matrix", "--k", "2", "--n", "3", "--rhs", "1,2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["det"]["num"], "1");
    assert_eq!(v["det"]["den"], "12");
    let u = &v["solution"]["unknowns"];
    assert_eq!(u[0]["re"]["num"], "2");
    assert_eq!(u[1]["re"]["num"], "0");
}

#[test]
fn inner_and_crit_commands() {
    let o = innerkit(&["inner", "--seq", "radial", "--a", "0.5", "--J", "3", "--z", "0.75,0", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(value[1].parse::<f64>().unwrap().abs() < 1e-15);

    let o = innerkit(&["crit", "boundary", "--format", "csv"]);
    assert!(o.status.success());
    let sup: f64 = stdout(&o).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((sup - 2.0).abs() < 1e-9);
}
