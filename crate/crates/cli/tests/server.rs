use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use conch_cli::{router, AppState};
use conch_core::analytics::interactions_from_paths;
use conch_core::ingest::serialize_corpus;
use conch_core::layout::LayoutConfig;
use conch_core::synth::{demo_corpus, demo_corpus_zh};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

fn app() -> Router {
    router(Arc::new(AppState::new(demo_corpus(), LayoutConfig::default())))
}

async fn send(app: &Router, method: Method, uri: &str, body: Body) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).body(body).unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    send(app, Method::GET, uri, Body::empty()).await
}

fn chord_count(node: &Value) -> usize {
    let own = usize::from(node["kind"] == "chord");
    own + node["children"].as_array().map_or(0, |c| c.iter().map(chord_count).sum())
}

#[tokio::test]
async fn corpus_and_stats() {
    let app = app();
    let (status, body) = get(&app, "/api/corpus").await;
    assert_eq!(status, StatusCode::OK);
    let expected: Value = serde_json::from_str(&serialize_corpus(&demo_corpus())).unwrap();
    assert_eq!(body, expected);
    let (status, stats) = get(&app, "/api/stats").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(stats["sessionCount"], 4);
}

#[tokio::test]
async fn clash_points_carry_counts() {
    let (status, body) = get(&app(), "/api/clash-points").await;
    assert_eq!(status, StatusCode::OK);
    let list = body.as_array().unwrap();
    let corpus = demo_corpus();
    assert_eq!(list.len(), corpus.clash_points().len());
    let interactions = interactions_from_paths(&corpus);
    for cp in list {
        let id = cp["id"].as_str().unwrap();
        let n = interactions.iter().filter(|i| i.clash_point_id.as_str() == id).count();
        assert_eq!(cp["interactionCount"], n);
        assert!(cp["color"].as_str().unwrap().starts_with('#'));
    }
}

#[tokio::test]
async fn filtered_process_scene() {
    let app = app();
    let corpus = demo_corpus();
    let expected = interactions_from_paths(&corpus).iter().filter(|i| i.clash_point_id.as_str() == "cp1").count();
    assert!(expected > 0);
    let (status, scene) = get(&app, "/api/scene/process?clashPoint=cp1").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(chord_count(&scene["root"]), expected);
    assert_eq!(scene["filter"]["clashPoint"], "cp1");
    let (_, all) = get(&app, "/api/scene/process").await;
    assert_eq!(chord_count(&all["root"]), interactions_from_paths(&corpus).len());
    // cached and fresh answers agree
    let (_, again) = get(&app, "/api/scene/process?clashPoint=cp1").await;
    assert_eq!(scene, again);
}

#[tokio::test]
async fn strategy_scene() {
    let (status, scene) = get(&app(), "/api/scene/strategy").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(scene["view"], "strategy");
    assert!(scene["strategy"]["columns"].as_array().is_some_and(|c| !c.is_empty()));
}

#[tokio::test]
async fn block_with_context() {
    let app = app();
    let (status, body) = get(&app, "/api/blocks/b7?context=1").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["block"]["blockId"], "b7");
    assert_eq!(body["before"][0]["blockId"], "b6");
    assert_eq!(body["after"][0]["blockId"], "b8");
    assert_eq!(body["before"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    assert_eq!(get(&app, "/api/blocks/nope").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/blocks/b7?context=x").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/blocks/b7?context=51").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/blocks/b7?extra=1").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/scene/process?color=red").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/scene/process?clashPoint=cp1&clashPoint=cp2").await.0, StatusCode::BAD_REQUEST);
    let (status, body) = get(&app, "/api/scene/process?clashPoint=cp99").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(body["error"].is_string());
    assert_eq!(get(&app, "/api/missing").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn rejected_upload_keeps_snapshot() {
    let app = app();
    let (_, before) = get(&app, "/api/stats").await;
    let (status, body) = send(&app, Method::POST, "/api/corpus", Body::from("{not json")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["error"].is_string());

    let mut doc: Value = serde_json::from_str(&serialize_corpus(&demo_corpus())).unwrap();
    doc["clashPoints"][0]["disagreements"][0]["path"] = serde_json::json!(["ghost"]);
    let (status, body) = send(&app, Method::POST, "/api/corpus", Body::from(doc.to_string())).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(!body["report"]["errors"].as_array().unwrap().is_empty());
    assert_eq!(get(&app, "/api/stats").await.1, before);
}

#[tokio::test]
async fn upload_swaps_snapshot() {
    let app = app();
    let zh = demo_corpus_zh();
    let (status, body) = send(&app, Method::POST, "/api/corpus", Body::from(serialize_corpus(&zh))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["hash"].as_str().unwrap().len(), 64);
    let (_, stats) = get(&app, "/api/stats").await;
    assert_eq!(stats["sessionCount"], zh.sessions().len());
    assert_eq!(get(&app, "/api/blocks/b14").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_reads_during_swaps() {
    let app = app();
    let sizes = [demo_corpus().sessions().len(), demo_corpus_zh().sessions().len()];
    let mut tasks = Vec::new();
    for i in 0..32 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            if i % 4 == 0 {
                let c = if i % 8 == 0 { demo_corpus_zh() } else { demo_corpus() };
                let (status, _) = send(&app, Method::POST, "/api/corpus", Body::from(serialize_corpus(&c))).await;
                assert_eq!(status, StatusCode::OK);
            } else {
                let (status, scene) = get(&app, "/api/scene/process").await;
                assert_eq!(status, StatusCode::OK);
                let circles = scene["process"]["circles"].as_array().unwrap().len();
                assert!(sizes.contains(&circles), "torn snapshot: {circles} circles");
            }
        }));
    }
    for t in tasks {
        t.await.unwrap();
    }
}
