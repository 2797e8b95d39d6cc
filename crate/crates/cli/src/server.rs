//! JSON API over one corpus snapshot.
//!
//! Handlers clone the current `Arc<Snapshot>` once and answer from it, so a
//! request never sees two corpora. `POST /api/corpus` validates the upload
//! and swaps the snapshot atomically. Scene payloads are cached per
//! (corpus hash, view, filter).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use conch_core::analytics::interactions_from_paths;
use conch_core::annotate::sha256_hex;
use conch_core::ingest::{compute_stats, document_from_corpus, parse_corpus, serialize_corpus, CorpusStats};
use conch_core::layout::LayoutConfig;
use conch_core::model::{BlockId, ClashPointId, DebateCorpus, DisagreementId, ValidationReport};
use conch_core::scene::{block_context, build_view, clash_color, FilterState, SceneError, View};
use serde::Serialize;
use serde_json::json;

const CACHE_CAPACITY: usize = 256;
const MAX_CONTEXT: usize = 50;

pub struct Snapshot {
    pub corpus: DebateCorpus,
    /// SHA-256 of the canonical serialization.
    pub hash: String,
    pub stats: CorpusStats,
}

impl Snapshot {
    pub fn new(corpus: DebateCorpus) -> Self {
        let hash = sha256_hex(&serialize_corpus(&corpus));
        let stats = compute_stats(&corpus);
        Self { corpus, hash, stats }
    }
}

type CacheKey = (String, View, String);

pub struct AppState {
    snapshot: RwLock<Arc<Snapshot>>,
    config: LayoutConfig,
    cache: Mutex<HashMap<CacheKey, Arc<String>>>,
}

impl AppState {
    pub fn new(corpus: DebateCorpus, config: LayoutConfig) -> Self {
        Self { snapshot: RwLock::new(Arc::new(Snapshot::new(corpus))), config, cache: Mutex::new(HashMap::new()) }
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.snapshot.read().expect("snapshot lock").clone()
    }

    fn replace(&self, corpus: DebateCorpus) -> Arc<Snapshot> {
        let next = Arc::new(Snapshot::new(corpus));
        *self.snapshot.write().expect("snapshot lock") = next.clone();
        next
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/corpus", get(get_corpus).post(post_corpus))
        .route("/api/stats", get(get_stats))
        .route("/api/clash-points", get(get_clash_points))
        .route("/api/scene/process", get(scene_process))
        .route("/api/scene/strategy", get(scene_strategy))
        .route("/api/blocks/{id}", get(get_block))
        .layer(DefaultBodyLimit::max(32 * 1024 * 1024))
        .with_state(state)
}

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    BadRequest(String),
    Unprocessable { message: String, report: ValidationReport },
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, json!({ "error": m })),
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, json!({ "error": m })),
            ApiError::Unprocessable { message, report } => {
                (StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": message, "report": report }))
            }
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": m })),
        };
        (status, Json(body)).into_response()
    }
}

impl From<SceneError> for ApiError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::UnknownFilterTarget { .. } => ApiError::NotFound(e.to_string()),
            SceneError::Layout(_) => ApiError::Internal(e.to_string()),
        }
    }
}

fn json_body(body: Arc<String>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body.as_str().to_owned()).into_response()
}

async fn get_corpus(State(state): State<Arc<AppState>>) -> Response {
    Json(document_from_corpus(&state.snapshot().corpus)).into_response()
}

async fn get_stats(State(state): State<Arc<AppState>>) -> Response {
    Json(state.snapshot().stats.clone()).into_response()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DisagreementSummary {
    pub id: DisagreementId,
    pub label: String,
    pub affirmative_viewpoint: String,
    pub negative_viewpoint: String,
    pub path: Vec<BlockId>,
}

/// Legend entry for one clash point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClashPointSummary {
    pub id: ClashPointId,
    pub label: String,
    pub color_key: usize,
    pub color: &'static str,
    pub block_count: usize,
    pub interaction_count: usize,
    pub disagreements: Vec<DisagreementSummary>,
}

pub fn clash_point_summaries(corpus: &DebateCorpus) -> Vec<ClashPointSummary> {
    let interactions = interactions_from_paths(corpus);
    corpus
        .clash_points()
        .iter()
        .map(|c| ClashPointSummary {
            id: c.id.clone(),
            label: c.label.clone(),
            color_key: c.color_key,
            color: clash_color(c.color_key),
            block_count: corpus.blocks().iter().filter(|b| b.references_clash(&c.id)).count(),
            interaction_count: interactions.iter().filter(|i| i.clash_point_id == c.id).count(),
            disagreements: c
                .disagreement_ids
                .iter()
                .filter_map(|d| corpus.disagreement(d))
                .map(|d| DisagreementSummary {
                    id: d.id.clone(),
                    label: d.label.clone(),
                    affirmative_viewpoint: d.affirmative_viewpoint.clone(),
                    negative_viewpoint: d.negative_viewpoint.clone(),
                    path: d.path.clone(),
                })
                .collect(),
        })
        .collect()
}

async fn get_clash_points(State(state): State<Arc<AppState>>) -> Response {
    Json(clash_point_summaries(&state.snapshot().corpus)).into_response()
}

async fn scene_process(
    State(state): State<Arc<AppState>>,
    Query(params): Query<Vec<(String, String)>>,
) -> Result<Response, ApiError> {
    scene(state, View::Process, params).await
}

async fn scene_strategy(
    State(state): State<Arc<AppState>>,
    Query(params): Query<Vec<(String, String)>>,
) -> Result<Response, ApiError> {
    scene(state, View::Strategy, params).await
}

async fn scene(state: Arc<AppState>, view: View, params: Vec<(String, String)>) -> Result<Response, ApiError> {
    let filter = FilterState::from_pairs(params).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let snap = state.snapshot();
    let key: CacheKey = (snap.hash.clone(), view, serde_json::to_string(&filter).expect("filter serializes"));
    if let Some(hit) = state.cache.lock().expect("cache lock").get(&key).cloned() {
        return Ok(json_body(hit));
    }
    let config = state.config.clone();
    let built = tokio::task::spawn_blocking(move || {
        build_view(&snap.corpus, &config, &filter, view).map(|s| serde_json::to_string(&s).expect("scene serializes"))
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))??;
    let body = Arc::new(built);
    let mut cache = state.cache.lock().expect("cache lock");
    if cache.len() >= CACHE_CAPACITY {
        cache.clear();
    }
    cache.insert(key, body.clone());
    Ok(json_body(body))
}

async fn get_block(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(params): Query<Vec<(String, String)>>,
) -> Result<Response, ApiError> {
    let mut context = 0;
    for (k, v) in params {
        match k.as_str() {
            "context" => {
                context =
                    v.parse::<usize>().ok().filter(|&n| n <= MAX_CONTEXT).ok_or_else(|| {
                        ApiError::BadRequest(format!("context must be an integer in 0..={MAX_CONTEXT}"))
                    })?
            }
            other => return Err(ApiError::BadRequest(format!("unknown parameter {other:?}"))),
        }
    }
    let snap = state.snapshot();
    block_context(&snap.corpus, &BlockId::new(id.as_str()), context)
        .map(|b| Json(b).into_response())
        .ok_or_else(|| ApiError::NotFound(format!("unknown block {id:?}")))
}

async fn post_corpus(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let ingested = parse_corpus(&body).map_err(|e| ApiError::Unprocessable {
        message: e.to_string(),
        report: e.report().cloned().unwrap_or_default(),
    })?;
    let snap = state.replace(ingested.corpus);
    tracing::info!(hash = %snap.hash, "corpus replaced");
    Ok(Json(json!({ "hash": snap.hash, "stats": snap.stats, "report": ingested.report })).into_response())
}
