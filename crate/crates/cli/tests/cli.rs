use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commloyalty"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn synth_corpus(dir: &Path) {
    let out = dir.join("corpus");
    let o = run(&["synth", "--seed", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("synth/comments.jsonl").is_file());
}

fn write_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        format!(
            "seed = 4\n[paths]\ncomments = \"corpus/synth/comments.jsonl\"\nposts = \"corpus/synth/posts.jsonl\"\n{extra}"
        ),
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn ingest_succeeds_and_records_provenance() {
    let dir = tempfile::tempdir().unwrap();
    synth_corpus(dir.path());
    let cfg = write_config(dir.path(), "");
    let out = dir.path().join("out");
    let o = run(&["--config", &cfg, "--out", out.to_str().unwrap(), "ingest"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(out.join("ingest/ingest.json")).unwrap();
    assert!(report.contains("\"seed\": 4"));
    assert!(report.contains("config_sha256"));
    let csv = std::fs::read_to_string(out.join("ingest/communities.csv")).unwrap();
    assert!(csv.starts_with("# "));
    assert!(csv.contains("# seed: 4"));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    synth_corpus(dir.path());
    let cfg = write_config(dir.path(), "");
    let out = dir.path().join("out");
    let o = run(&["--config", &cfg, "--seed", "77", "--threads", "2", "--out", out.to_str().unwrap(), "ingest"]);
    assert_eq!(code(&o), 0);
    let report = std::fs::read_to_string(out.join("ingest/ingest.json")).unwrap();
    assert!(report.contains("\"seed\": 77"));
}

#[test]
fn empty_result_is_a_partial_run() {
    // four synthetic months leave no first-k test window
    let dir = tempfile::tempdir().unwrap();
    synth_corpus(dir.path());
    let cfg = write_config(dir.path(), "");
    let out = dir.path().join("out");
    let o = run(&["--config", &cfg, "--out", out.to_str().unwrap(), "predict", "--task", "first_k"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(out.join("predict_first_k/run.json")).unwrap();
    assert!(summary.contains("warnings"));
}

#[test]
fn missing_input_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let o = run(&["--config", &cfg, "--out", dir.path().join("out").to_str().unwrap(), "loyalty"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("comments.jsonl"));
}

#[test]
fn unset_paths_are_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--out", dir.path().to_str().unwrap(), "network"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn bad_config_and_usage_are_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[loyalty]\nthreshold = 0.4\n");
    assert_eq!(code(&run(&["--config", &cfg, "ingest"])), 1);
    assert_eq!(code(&run(&["predict", "--task", "sideways"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
