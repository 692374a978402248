use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("ZLAB_THREADS")
        .output()
        .expect("zlab runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    assert_eq!(text.trim().lines().count(), 1, "{text}");
    serde_json::from_str(text.trim()).expect("stderr is one JSON object")
}

#[test]
fn eval_zeta_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(dir.path(), &["eval", "--sigma", "2", "--t", "0", "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v[0]["re"].as_f64().unwrap() - 1.6449340668).abs() < 1e-10);
}

#[test]
fn zeros_to_one_hundred() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(
        dir.path(),
        &[
            "zeros", "--from", "0", "--to", "100", "--format", "csv", "--out", "z.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("z.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("ordinate,bracket_width"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 29);
    assert!(rows[0].starts_with("14.1347251417"));
}

#[test]
fn lemma2_record_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(
        dir.path(),
        &[
            "lemma2", "--T", "1e6", "--A", "0", "--B", "1", "--C", "0", "--out", "r.json",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(rec["name"], "sine_phase_average");
    assert_eq!(rec["verdict"], "pass");
    assert!((rec["computed"]["value"].as_f64().unwrap() - std::f64::consts::FRAC_2_PI).abs() <= 0.03);
    for key in ["inputs", "computed", "reference", "checks", "runtime_seconds"] {
        assert!(rec.get(key).is_some(), "{key}");
    }
}

#[test]
fn missing_flag_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(dir.path(), &["mean", "--T", "100", "--delta", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr_json(&o);
    assert_eq!(err["error"], "usage");
    assert!(err["message"].as_str().unwrap().contains("--sigma"));
}

#[test]
fn bad_flag_value_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(dir.path(), &["mean", "--sigma", "abc"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");
}

#[test]
fn pole_is_numeric_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(dir.path(), &["eval", "--sigma", "1", "--t", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "pole");
}

#[test]
fn domain_violation_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(dir.path(), &["growth", "--sigma", "0.7", "--heights", "1e2,1e3,1e4"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "domain");
}

#[test]
fn report_exits_one_on_failed_record() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(
        dir.path(),
        &[
            "convexity",
            "--sigma",
            "0.75",
            "--delta",
            "1",
            "--T",
            "1000",
            "--A",
            "2",
            "--out",
            "c.json",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let mut rec: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    rec["verdict"] = Value::String("fail".into());
    std::fs::write(dir.path().join("bad.json"), rec.to_string()).unwrap();
    let o = zlab(
        dir.path(),
        &["report", "--inputs", "c.json,bad.json", "--format", "csv", "--out", "-"],
    );
    assert_eq!(o.status.code(), Some(1));
    let csv = stdout(&o);
    assert!(csv.contains("c.json,convexity_check,pass"));
    assert!(csv.contains("bad.json,convexity_check,fail"));
}

#[test]
fn default_output_name_uses_experiment_and_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(dir.path(), &["lemma2", "--T", "1e3", "--format", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names.len(), 2);
    assert!(names[0].starts_with("sine_phase_average-") && names[0].ends_with(".csv"));
    assert!(names[1].starts_with("sine_phase_average-") && names[1].ends_with(".json"));
    assert_eq!(names[0].trim_end_matches(".csv"), names[1].trim_end_matches(".json"));
    assert!(names[0].ends_with("Z.csv"));
}

#[test]
fn config_file_with_cli_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.json"),
        r#"{"command": "search", "sigma": 0.75, "H": 1, "target": "const:0", "grid-min": 100, "grid-max": 120, "grid-step": 1}"#,
    )
    .unwrap();
    let o = zlab(
        dir.path(),
        &["--config", "c.json", "--grid-max", "110", "--out", "s.json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(rec["inputs"]["grid"]["T_max"], 110.0);
}

#[test]
fn dumped_config_reproduces_output_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bound",
        "--target",
        "poly:1,-1",
        "--H",
        "1",
        "--grid-min",
        "1000",
        "--grid-max",
        "1020",
    ];
    let dumped = zlab(dir.path(), &[&args[..], &["--dump-config"]].concat());
    assert_eq!(dumped.status.code(), Some(0));
    std::fs::write(dir.path().join("c.json"), stdout(&dumped)).unwrap();
    let a = zlab(
        dir.path(),
        &[&args[..], &["--format", "both", "--out", "a.json"]].concat(),
    );
    let b = zlab(
        dir.path(),
        &["--config", "c.json", "--format", "both", "--out", "b.json"],
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let strip = |name: &str| -> Value {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        v["runtime_seconds"] = Value::from(0.0);
        v
    };
    assert_eq!(strip("a.json"), strip("b.json"));
    assert_eq!(
        std::fs::read(dir.path().join("a.csv")).unwrap(),
        std::fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn target_file_must_span_window() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f.csv"), "t,re,im\n0,1,0\n0.5,1,0\n").unwrap();
    let o = zlab(
        dir.path(),
        &[
            "search",
            "--sigma",
            "0.75",
            "--H",
            "1",
            "--target",
            "f.csv",
            "--grid-min",
            "100",
            "--grid-max",
            "110",
            "--grid-step",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(dir.path().join("g.csv"), "t,re,im\n0,1,0\n0.6,1,0\n0.5,1,0\n1,1,0\n").unwrap();
    let o = zlab(
        dir.path(),
        &[
            "search",
            "--sigma",
            "0.75",
            "--H",
            "1",
            "--target",
            "g.csv",
            "--grid-min",
            "100",
            "--grid-max",
            "110",
            "--grid-step",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn threads_flag_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(dir.path(), &["theta", "--t", "100", "--threads", "2", "--out", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(["theta", "--t", "100"])
        .env("ZLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn z_table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = zlab(
        dir.path(),
        &["z", "--from", "14", "--to", "14.3", "--step", "0.1", "--format", "csv"],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1] * rows[2] < 0.0, "{out}");
}
