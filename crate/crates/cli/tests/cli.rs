use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lindkrylov")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("cfg.json");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

const SMALL: &str = r#"{
  "model": {"n": 8, "q": 4, "j": 1.0},
  "dissipation": {"class": "linear", "lambda": 0.1},
  "initial_operator": {"indices": [1]},
  "algorithm": {"max_steps": 12},
  "realizations": 2,
  "seed": 5,
  "out_dir": "unused"
}"#;

#[test]
fn lanczos_writes_tables_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(&["lanczos", "--config", &cfg, "--out-dir", out.to_str().unwrap(), "--threads", "1"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let mean = std::fs::read_to_string(a.join("lanczos_mean.csv")).unwrap();
    assert!(mean.starts_with("n,count,re_a,im_a,abs_a"));
    assert_eq!(mean.lines().count(), 13);
    assert!(a.join("lanczos_r0001.csv").exists());
    assert_eq!(mean, std::fs::read_to_string(b.join("lanczos_mean.csv")).unwrap());
}

#[test]
fn json_format_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("j");
    let o = run(&["lanczos", "--config", &cfg, "--seed", "9", "--realizations", "1", "--format", "json", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("lanczos.json")).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["realizations"], 1);
}

#[test]
fn invalid_config_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), &SMALL.replace("\"n\": 8", "\"n\": 7"));
    assert_eq!(run(&["lanczos", "--config", &bad]).status.code(), Some(1));
    let unknown = write_config(dir.path(), &SMALL.replace("\"seed\"", "\"sed\""));
    assert_eq!(run(&["sweep", "--config", &unknown]).status.code(), Some(1));
    assert_eq!(run(&["evolve", "--config", "/nonexistent/cfg.json"]).status.code(), Some(1));
    assert_eq!(run(&["lanczos", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn analytic_writes_closed_form_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["analytic", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["analytic_chain.csv", "analytic_spectral.csv", "analytic_large_q.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

#[test]
fn verify_passes() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() >= 8 && text.lines().all(|l| l.starts_with("PASS")), "{text}");
}
