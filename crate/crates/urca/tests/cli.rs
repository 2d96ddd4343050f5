use std::process::Command;

fn urca() -> Command {
    Command::new(env!("CARGO_BIN_EXE_urca"))
}

#[test]
fn missing_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let st = urca()
        .args(["--config", "does/not/exist.toml", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(2));
}

#[test]
fn misspelled_key_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[grid]\nn_landua = 2\n").unwrap();
    let out = urca().arg("--config").arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("n_landua"), "{err}");
}

#[test]
fn invariants_run_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let st = urca()
        .args(["--experiment", "invariants", "--quiet", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!(v["content_hash"].as_str().is_some_and(|h| h.len() == 64));
}
