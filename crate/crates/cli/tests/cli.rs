use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use randfourier::counterexample::dirichlet_integral_exact;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_randfourier"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("randfourier-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn power_law_above_one_half_holds() {
    let dir = scratch("holds");
    let cfg = dir.join("c.json");
    fs::write(&cfg, r#"{"coefficients":{"kind":"power_law","delta":0.6,"scale":1},"regime":{"regime":"polynomial","d":1},"horizon":10000}"#)
        .unwrap();
    let out = dir.join("out");
    let o = run(&["check-conditions", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out.join("check-conditions.json"));
    assert_eq!(r["result"]["condition"]["verdict"], "holds");
    assert_eq!(r["manifest"]["seed"], 0);
}

#[test]
fn empty_sequence_gives_zero_diagnostics() {
    let dir = scratch("empty");
    let cfg = dir.join("c.json");
    fs::write(&cfg, r#"{"coefficients":{"kind":"explicit","values":[],"tail":{"kind":"zero"}},"horizon":1000}"#).unwrap();
    let out = dir.join("out");
    let o = run(&["check-conditions", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out.join("check-conditions.json"))["result"].clone();
    for p in r["partial_sums"].as_array().unwrap() {
        assert_eq!(p[1].as_f64().unwrap(), 0.0);
    }
    assert_eq!(r["condition"]["partial_sum"].as_f64().unwrap(), 0.0);
    assert_eq!(r["total_variation"]["partial_sum"].as_f64().unwrap(), 0.0);
}

#[test]
fn unknown_fields_exit_two_with_position() {
    let dir = scratch("typo");
    let cfg = dir.join("c.json");
    fs::write(&cfg, "{\n  \"horizon\": 100,\n  \"horizn\": 5\n}").unwrap();
    let o = run(&["check-conditions", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("c.json:3:"), "{err}");
    assert!(err.contains("horizn"), "{err}");
}

#[test]
fn refusals_exit_three_with_report() {
    let dir = scratch("refusal");
    let cfg = dir.join("c.json");
    fs::write(&cfg, r#"{"k_max":20,"quadrature_points":50}"#).unwrap();
    let o = run(&["counterexample", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let r = report(&dir.join("counterexample.refusal.json"));
    assert_eq!(r["refusal"]["kind"], "quadrature_under_resolved");
    assert_eq!(r["manifest"]["config"]["quadrature_points"], 50);
}

#[test]
fn counterexample_csv_matches_exact_integrals() {
    let dir = scratch("counterexample");
    let o = run(&["counterexample", "--delta", "0.5", "--kmax", "200", "--format", "csv", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.join("counterexample_integrals.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest: "));
    assert_eq!(lines.next().unwrap(), "k,i_k");
    let mut count = 0;
    for line in lines {
        let (k, v) = line.split_once(',').unwrap();
        let (k, v): (u64, f64) = (k.parse().unwrap(), v.parse().unwrap());
        assert!((v - dirichlet_integral_exact(k)).abs() < 1e-4, "k={k}: {v}");
        count += 1;
    }
    assert_eq!(count, 200);
}

#[test]
fn rerun_from_embedded_manifest_is_byte_identical() {
    let dir = scratch("rerun");
    let first = dir.join("first");
    let second = dir.join("second");
    let cfg = dir.join("c.json");
    fs::write(
        &cfg,
        r#"{"window":{"lo":1,"hi":2,"grid_points":65,"j_max":1,"exclude_zero_margin":1},"checkpoints":[16,32,64,128]}"#,
    )
    .unwrap();
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "42", "--format", "csv", "--out", first.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["--threads", "1", "rerun", "--from", first.join("simulate.csv").to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["simulate.csv", "simulate.json"] {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(second.join(name)).unwrap(), "{name}");
    }
    let m = report(&first.join("simulate.json"))["manifest"].clone();
    assert_eq!(m["seed"], 42);
    assert_eq!(m["config"]["checkpoints"][3], 128);
}

#[test]
fn flags_override_config_fields() {
    let dir = scratch("override");
    let cfg = dir.join("c.json");
    fs::write(&cfg, r#"{"which":"H","m_cap":32,"n_max":32,"window":{"lo":1,"hi":2,"grid_points":17,"j_max":1,"exclude_zero_margin":1}}"#)
        .unwrap();
    let o = run(&["check-hypothesis", "--config", cfg.to_str().unwrap(), "--which", "Hsecond", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&dir.join("check-hypothesis.json"));
    assert_eq!(r["manifest"]["config"]["which"], "Hsecond");
    assert_eq!(r["result"]["hypothesis"], "Hsecond");
    for key in ["sup", "witness", "profile", "verdict", "truncation_note"] {
        assert!(!r["result"][key].is_null(), "{key}");
    }
}
