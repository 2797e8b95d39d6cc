//! Regenerates everything under `fixtures/`.
//!
//!     cargo run -p conch-core --example gen_fixtures [-- <dir>]
//!
//! Output is deterministic; rerunning on an unchanged tree leaves `git
//! status` clean.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use conch_core::annotate::{annotate_transcript, sha256_hex, Annotator, LlmClient, LlmConfig, RecordingTransport};
use conch_core::ingest::{compute_stats, serialize_corpus};
use conch_core::layout::LayoutConfig;
use conch_core::scene::{build_view, render_svg, FilterState, View};
use conch_core::synth::{demo_corpus, demo_corpus_zh, demo_transcript, icdi_shape, IcdiManifest, ScriptedModel};
use serde_json::json;

fn write(dir: &Path, name: &str, body: &str, hashes: &mut BTreeMap<String, String>) {
    let path = dir.join(name);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(&path, body).unwrap();
    hashes.insert(name.to_string(), sha256_hex(body));
    println!("wrote {}", path.display());
}

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"));
    let mut hashes = BTreeMap::new();

    let icdi = icdi_shape();
    write(&dir, "icdi-shape.json", &serialize_corpus(&icdi), &mut hashes);

    for (name, corpus) in [("demo", demo_corpus()), ("demo-zh", demo_corpus_zh())] {
        write(&dir, &format!("{name}.json"), &serialize_corpus(&corpus), &mut hashes);
        let scene = build_view(&corpus, &LayoutConfig::default(), &FilterState::default(), View::All).unwrap();
        write(&dir, &format!("golden/{name}.svg"), &render_svg(&scene), &mut hashes);
    }

    let transcript = demo_transcript();
    write(&dir, "demo-transcript.json", &transcript.to_json(), &mut hashes);
    let fallback = annotate_transcript(&transcript, Annotator::Fallback).unwrap();
    write(&dir, "demo-transcript.fallback.json", &serialize_corpus(&fallback.corpus), &mut hashes);

    let llm_dir = dir.join("llm");
    if llm_dir.exists() {
        fs::remove_dir_all(&llm_dir).unwrap();
    }
    let recorder = RecordingTransport::new(Arc::new(ScriptedModel::for_transcript(&transcript)), &llm_dir).unwrap();
    let client =
        LlmClient::new(LlmConfig { backoff_ms: 0, max_retries: 0, ..LlmConfig::default() }, Arc::new(recorder));
    let replayed = annotate_transcript(&transcript, Annotator::Llm(&client)).unwrap();
    write(&dir, "demo-transcript.replay.json", &serialize_corpus(&replayed.corpus), &mut hashes);

    let stats = compute_stats(&icdi);
    let manifest = json!({
        "icdiShape": {
            "file": "icdi-shape.json",
            "expected": IcdiManifest::default(),
            "generated": {
                "debaters": stats.debater_count,
                "sessions": stats.session_count,
                "turns": stats.turn_count,
                "blocks": stats.block_count,
                "totalContentLength": stats.total_content_length,
            },
        },
        "demos": ["demo.json", "demo-zh.json"],
        "goldens": {"demo.json": "golden/demo.svg", "demo-zh.json": "golden/demo-zh.svg"},
        "transcript": {
            "file": "demo-transcript.json",
            "fallback": "demo-transcript.fallback.json",
            "replay": "demo-transcript.replay.json",
            "recordings": "llm",
            "recordedCalls": replayed.calls.len(),
        },
        "sha256": hashes,
    });
    let mut body = serde_json::to_string_pretty(&manifest).unwrap();
    body.push('\n');
    fs::write(dir.join("manifest.json"), body).unwrap();
    println!("wrote {}", dir.join("manifest.json").display());
}
