use std::path::Path;
use std::process::{Command, Output};

const SCENARIO_B: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/scenario_b.json");

fn uavpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavpos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn train_writes_returns_and_policy() {
    let out = tempfile::tempdir().unwrap();
    let dir = out.path().to_str().unwrap();
    let run = uavpos(&["train", "--config", SCENARIO_B, "--seed", "3", "--episodes", "2", "--out", dir]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let returns = read(out.path(), "returns.csv");
    assert_eq!(returns.lines().count(), 3);
    assert!(returns.starts_with("episode,return\n"));
    let policy: serde_json::Value = serde_json::from_str(&read(out.path(), "policy.json")).unwrap();
    assert!(policy["best_reward"].as_f64().unwrap() > 0.0);
}

#[test]
fn eval_is_reproducible() {
    let out = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let dir = out.path().join(sub);
        let r = uavpos(&[
            "eval", "--config", SCENARIO_B, "--position", "35,10,2", "--seeds", "1,2,3",
            "--duration", "5", "--out", dir.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        (r.stdout, read(&dir, "manifest.json"))
    };
    let first = run("a");
    assert_eq!(first, run("b"));
    assert!(String::from_utf8_lossy(&first.0).contains("median throughput"));
}

#[test]
fn oracle_prints_json() {
    let run = uavpos(&["oracle", "--config", SCENARIO_B, "--resolution", "5"]);
    assert!(run.status.success());
    let result: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(result["position"], serde_json::json!({"x": 35.0, "y": 10.0, "z": 2.0}));
}

#[test]
fn bad_input_fails_cleanly() {
    let missing = uavpos(&["oracle", "--config", "/nonexistent.json"]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error: "));

    let bad_position = uavpos(&["eval", "--config", SCENARIO_B, "--position", "1,2"]);
    assert!(!bad_position.status.success());
}
