use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn conch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conch"))
        .args(args)
        .env_remove("CONCH_LLM_URL")
        .env_remove("CONCH_LLM_KEY")
        .env_remove("CONCH_LLM_MODEL")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn ingest_reports_and_canonicalizes() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("canon.json");
    let out = conch(&["ingest", &fixture("demo.json"), "--out", out_file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["stats"]["sessionCount"], 4);
    assert_eq!(fs::read_to_string(out_file).unwrap(), fs::read_to_string(fixture("demo.json")).unwrap());
}

#[test]
fn invalid_corpus_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(fixture("demo.json")).unwrap()).unwrap();
    doc["clashPoints"][0]["disagreements"][0]["path"] = serde_json::json!(["ghost"]);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, doc.to_string()).unwrap();
    let out = conch(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["errors"].as_array().unwrap().is_empty());
    let out = conch(&["ingest", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
    let out = conch(&["stats", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn validate_clean_fixture() {
    let out = conch(&["validate", &fixture("demo-zh.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["errors"], serde_json::json!([]));
}

#[test]
fn stats_formats() {
    let out = conch(&["stats", &fixture("icdi-shape.json")]);
    let v = json(&out);
    assert_eq!(
        (v["debaterCount"].as_u64(), v["sessionCount"].as_u64(), v["turnCount"].as_u64()),
        (Some(8), Some(13), Some(181))
    );
    let table = conch(&["stats", &fixture("icdi-shape.json"), "--format", "table"]);
    assert!(table.status.success());
    assert!(String::from_utf8_lossy(&table.stdout).contains("181"));
    let all = json(&conch(&["stats", &fixture("demo.json"), "--analytics"]));
    for key in ["interactions", "sessions", "strategyUsage", "peaks", "cooccurrence"] {
        assert!(!all["analytics"][key].is_null(), "missing {key}");
    }
}

#[test]
fn annotate_fallback_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = conch(&["annotate", &fixture("demo-transcript.json"), "--fallback", "--out", target.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&target).unwrap(), fs::read(fixture("demo-transcript.fallback.json")).unwrap());
    assert_eq!(json(&out)["calls"], serde_json::json!([]));
}

#[test]
fn annotate_replay_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = conch(&[
        "annotate",
        &fixture("demo-transcript.json"),
        "--replay-llm",
        &fixture("llm"),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&target).unwrap(), fs::read(fixture("demo-transcript.replay.json")).unwrap());
    let manifest: Value = serde_json::from_str(&fs::read_to_string(fixture("manifest.json")).unwrap()).unwrap();
    assert_eq!(
        json(&out)["calls"].as_array().unwrap().len() as u64,
        manifest["transcript"]["recordedCalls"].as_u64().unwrap()
    );
}

#[test]
fn annotate_without_endpoint_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        conch(&["annotate", &fixture("demo-transcript.json"), "--out", dir.path().join("x.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CONCH_LLM_URL"));
}

#[test]
fn layout_writes_scene_json() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("scene.json");
    let out = conch(&[
        "layout",
        &fixture("demo.json"),
        "--view",
        "process",
        "--filter",
        "clashPoint=cp1",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let scene: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(scene["view"], "process");
    assert_eq!(scene["filter"]["clashPoint"], "cp1");
    let bad = conch(&[
        "layout",
        &fixture("demo.json"),
        "--view",
        "process",
        "--filter",
        "oops",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn layout_config_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(&config, r#"{"chordCircleRadius": 200}"#).unwrap();
    let target = dir.path().join("scene.json");
    let args = [
        "layout",
        &fixture("demo.json"),
        "--view",
        "all",
        "--config",
        config.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ];
    assert!(conch(&args).status.success());
    let scene: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(scene["process"]["chordCircleRadius"], 200.0);
    fs::write(&config, r#"{"pitchFraction": 2}"#).unwrap();
    assert_eq!(conch(&args).status.code(), Some(2));
}

#[test]
fn export_matches_goldens() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["demo", "demo-zh"] {
        let svg = dir.path().join(format!("{name}.svg"));
        let out = conch(&["export", &fixture(&format!("{name}.json")), "--svg", svg.to_str().unwrap()]);
        assert!(out.status.success());
        assert_eq!(fs::read(&svg).unwrap(), fs::read(fixture(&format!("golden/{name}.svg"))).unwrap(), "{name}");
    }
}

fn free_port() -> u16 {
    std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

#[test]
fn serve_answers_http() {
    let port = free_port();
    let mut child = Command::new(env!("CARGO_BIN_EXE_conch"))
        .args(["serve", &fixture("demo.json"), "--port", &port.to_string()])
        .spawn()
        .unwrap();
    let url = format!("http://127.0.0.1:{port}/api/stats");
    let deadline = Instant::now() + Duration::from_secs(20);
    let body = loop {
        match ureq::get(&url).call() {
            Ok(mut res) => break res.body_mut().read_to_string().unwrap(),
            Err(_) if Instant::now() < deadline => std::thread::sleep(Duration::from_millis(50)),
            Err(e) => {
                child.kill().ok();
                panic!("server did not answer: {e}");
            }
        }
    };
    child.kill().ok();
    child.wait().ok();
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["sessionCount"], 4);
}
