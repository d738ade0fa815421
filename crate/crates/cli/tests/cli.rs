use std::path::Path;
use std::process::{Command, Output};

fn kit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl-kit")).current_dir(dir).args(args).output().unwrap()
}

fn rank_one(dir: &Path, k: f64) -> String {
    let path = dir.join(format!("k{k}.json"));
    std::fs::write(&path, format!(r#"{{"dimension":1,"model":"z2_power","multiplicities":[{k}]}}"#)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn admissible_run_exits_zero_with_a_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = rank_one(dir.path(), 1.0);
    let out = kit(dir.path(), &["admissible", "--config", &cfg, "--p", "2", "--q", "2", "--alpha", "1", "--delta", "-1", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["experiment"], "admissible");
    assert_eq!(report["passed"], true);
    assert_eq!(report["summary"]["admissible"], true);
}

#[test]
fn inadmissible_weights_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = rank_one(dir.path(), 1.0);
    let out = kit(dir.path(), &["riesz-bound", "--config", &cfg, "--p", "2", "--q", "2", "--alpha", "1", "--delta", "0.5", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("delta < 0"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_config_and_unknown_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"dimension":0}"#).unwrap();
    assert_eq!(kit(dir.path(), &["constants", "--config", "bad.json"]).status.code(), Some(2));
    let cfg = rank_one(dir.path(), 0.5);
    assert_eq!(kit(dir.path(), &["constants", "--config", &cfg, "--param", "nope=1"]).status.code(), Some(2));
    assert_eq!(kit(dir.path(), &["no-such-experiment", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = rank_one(dir.path(), 0.5);
    let out = kit(
        dir.path(),
        &["riesz-bound", "--config", &cfg, "--p", "1.5", "--q", "1.5", "--alpha", "0.5", "--delta", "-0.5", "--beta", "0.25",
          "--param", "tolerance=1e-12", "--param", "n=256"],
    );
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn same_spec_and_seed_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = rank_one(dir.path(), 1.0);
    let run = |seed: &str, out: &str| {
        let o = kit(dir.path(), &["hardy-check", "--config", &cfg, "--p", "2", "--q", "3", "--seed", seed, "--out", out]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(dir.path().join(out)).unwrap()
    };
    let a = run("11", "a.json");
    assert_eq!(a, run("11", "b.json"));
    assert_ne!(a, run("12", "c.json"));
}

#[test]
fn rearrange_writes_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = rank_one(dir.path(), 1.0);
    let out = kit(dir.path(), &["rearrange", "--config", &cfg, "--param", "sample=gaussian", "--out", "r.json", "--csv", "r.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(dir.path().join("r.csv")).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["t", "f_star_t"]);
    let values: Vec<f64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(values.len(), 61);
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn full_config_carries_parameters_and_flags_override_them() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"cfg":{"dimension":1,"model":"z2_power","multiplicities":[0.5]},
                   "parameters":{"alpha":0.5,"p":3.0,"q":3.0,"delta":-0.5,"beta":1.0},"seed":4}"#;
    std::fs::write(dir.path().join("spec.json"), spec).unwrap();
    let out = kit(dir.path(), &["admissible", "--config", "spec.json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["admissible"], true);
    let out = kit(dir.path(), &["admissible", "--config", "spec.json", "--beta", "0.25"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["admissible"], false);
    assert_eq!(report["spec"]["seed"], 4);
}
