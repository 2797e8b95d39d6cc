//! Command-line front end and HTTP service for the conch engine.

pub mod commands;
pub mod llm;
pub mod server;

use std::sync::Arc;

use conch_core::layout::LayoutConfig;
use conch_core::model::DebateCorpus;

pub use server::{router, AppState};

/// Binds `host:port` and serves the API until the process is stopped.
pub async fn serve(corpus: DebateCorpus, config: LayoutConfig, host: &str, port: u16) -> std::io::Result<()> {
    let state = Arc::new(AppState::new(corpus, config));
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    tracing::info!(addr = %listener.local_addr()?, "serving");
    axum::serve(listener, router(state)).await
}
