use std::process::{Command, Output};

use nested_udd::experiment::{read_csv, CSV_HEADER};

fn nudd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nudd")).args(args).output().expect("spawn nudd")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn timing_prints_event_rows() {
    let o = nudd(&["timing", "--layers", "X0", "--n", "2", "--T", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let t = |r: &Vec<&str>| r[1].parse::<f64>().unwrap();
    assert!((t(&rows[0]) - 0.25).abs() < 1e-15 && rows[0][3] == "X0");
    assert!((t(&rows[1]) - 0.75).abs() < 1e-15 && rows[1][3] == "X0");
    assert_eq!(rows[2][3], "none");
}

#[test]
fn algebra_chart_for_working_ordering() {
    let o = nudd(&["algebra", "--ordering", "Xphi,X1,X0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with('{')).count(), 4);
    assert!(text.trim_end().lines().last().unwrap().starts_with("{Y1..Y5}"));
}

#[test]
fn algebra_breakdown_is_a_result() {
    let o = nudd(&["algebra", "--ordering", "X1,Xphi,X0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("breakdown"));
    assert!(text.contains("Y7"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nudd(&["sweep", "--bogus"]).status.code(), Some(2));
    assert_eq!(nudd(&["algebra", "--ordering", "X9"]).status.code(), Some(2));
    assert_eq!(nudd(&["sweep", "--preset", "fig9"]).status.code(), Some(2));
    assert_eq!(nudd(&["timing", "--layers", "X0", "--n", "0"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"ordering": "X0", "surprise": true}"#).unwrap();
    assert_eq!(nudd(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn sweep_from_config_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("out.csv");
    std::fs::write(&cfg, r#"{"ordering": ["Xphi,X1,X0", "none"], "n": [1, 2, 3], "models": 2, "states": 2, "T": 0.05}"#).unwrap();
    let o = nudd(&["sweep", "--config", cfg.to_str().unwrap(), "--n", "1..2", "--out", out.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.runs == 4));
    assert_eq!(rows[2].ordering, "none");

    let again = nudd(&["sweep", "--config", cfg.to_str().unwrap(), "--n", "1..2", "--jobs", "1"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn run_prints_json() {
    let o = nudd(&["run", "--ordering", "Xphi,X1,X0", "--n", "2", "--T", "0.1", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ordering"], "Xphi-X1-X0");
    assert_eq!(v["pulse_count"], 26);
    let d = v["d_value"].as_f64().unwrap();
    assert!(d > 0.0 && d < 1e-2);
}

#[test]
fn fit_reports_slope() {
    let o = nudd(&["fit", "--ordering", "X0", "--n", "1", "--models", "2", "--states", "1", "--state-kind", "basis0", "--points", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    let slope: f64 = text.lines().last().unwrap().trim_start_matches("# slope ").parse().unwrap();
    assert!((slope - 2.0).abs() < 0.5, "{slope}");
}
