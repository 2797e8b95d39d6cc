use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use conch_core::analytics::analyze;
use conch_core::annotate::{
    annotate_transcript, Annotator, LlmClient, LlmConfig, LlmTransport, RecordingTransport, ReplayTransport, Transcript,
};
use conch_core::ingest::{compute_stats, corpus_from_document, load_corpus, parse_document, serialize_corpus};
use conch_core::layout::LayoutConfig;
use conch_core::model::DebateCorpus;
use conch_core::scene::{build_view, render_svg, FilterState, View};
use serde::Serialize;

use crate::llm::HttpTransport;

#[derive(Debug, Parser)]
#[command(name = "conch", version, about = "Debate visual analytics: ingest, annotate, lay out, export and serve")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ViewArg {
    All,
    Process,
    Strategy,
}

impl From<ViewArg> for View {
    fn from(v: ViewArg) -> View {
        match v {
            ViewArg::All => View::All,
            ViewArg::Process => View::Process,
            ViewArg::Strategy => View::Strategy,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a corpus file; prints the validation report.
    Ingest {
        file: PathBuf,
        /// Treat warnings as errors.
        #[arg(long)]
        strict: bool,
        /// Write the corpus back out in canonical form.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the full validation report of a corpus file.
    Validate { file: PathBuf },
    /// Dataset statistics: counts and content lengths.
    Stats {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: StatsFormat,
        /// Also emit every derived analytics table (JSON).
        #[arg(long)]
        analytics: bool,
    },
    /// Turn a raw transcript into an annotated corpus.
    Annotate {
        transcript: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Offline rules only, no model calls.
        #[arg(long, conflicts_with_all = ["record_llm", "replay_llm"])]
        fallback: bool,
        /// Save every model response under this directory.
        #[arg(long, conflicts_with = "replay_llm")]
        record_llm: Option<PathBuf>,
        /// Answer model calls from recordings instead of the network.
        #[arg(long)]
        replay_llm: Option<PathBuf>,
        #[arg(long, env = "CONCH_LLM_URL")]
        llm_url: Option<String>,
        #[arg(long, env = "CONCH_LLM_KEY", hide_env_values = true)]
        llm_key: Option<String>,
        #[arg(long, env = "CONCH_LLM_MODEL")]
        llm_model: Option<String>,
    },
    /// Compute a scene graph and write it as JSON.
    Layout {
        file: PathBuf,
        #[arg(long, value_enum)]
        view: ViewArg,
        #[arg(long)]
        out: PathBuf,
        /// Selection such as `clashPoint=cp1`; repeatable.
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
        /// Layout parameters (JSON; missing fields take defaults).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Render a scene to SVG.
    Export {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        view: ViewArg,
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Serve the JSON API for a corpus.
    Serve {
        file: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Process exit status for a finished command.
pub type Status = i32;

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn load(file: &Path) -> Result<DebateCorpus> {
    let ingested = load_corpus(file).with_context(|| format!("loading {}", file.display()))?;
    for w in &ingested.report.warnings {
        tracing::warn!(?w, "corpus warning");
    }
    Ok(ingested.corpus)
}

fn layout_config(path: Option<&Path>) -> Result<LayoutConfig> {
    let Some(path) = path else { return Ok(LayoutConfig::default()) };
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let config: LayoutConfig = serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    config.validate()?;
    Ok(config)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Status> {
    match cli.command {
        Command::Ingest { file, strict, out: target } => {
            let bytes = fs::read(&file).with_context(|| format!("reading {}", file.display()))?;
            let ingested = corpus_from_document(parse_document(&bytes)?);
            let report = if strict { ingested.report.clone().into_strict() } else { ingested.report.clone() };
            let valid = report.is_valid();
            let summary = serde_json::json!({
                "valid": valid,
                "stats": valid.then(|| compute_stats(&ingested.corpus)),
                "report": report,
            });
            out.write_all(pretty(&summary).as_bytes())?;
            if let (true, Some(target)) = (valid, target) {
                write_file(&target, &serialize_corpus(&ingested.corpus))?;
            }
            Ok(if valid { 0 } else { 1 })
        }
        Command::Validate { file } => {
            let bytes = fs::read(&file).with_context(|| format!("reading {}", file.display()))?;
            let report = corpus_from_document(parse_document(&bytes)?).report;
            out.write_all(pretty(&report).as_bytes())?;
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Stats { file, format, analytics } => {
            let corpus = load(&file)?;
            let stats = compute_stats(&corpus);
            if analytics {
                let all = serde_json::json!({ "stats": stats, "analytics": analyze(&corpus) });
                out.write_all(pretty(&all).as_bytes())?;
            } else {
                match format {
                    StatsFormat::Json => out.write_all(pretty(&stats).as_bytes())?,
                    StatsFormat::Table => out.write_all(stats.to_table().as_bytes())?,
                }
            }
            Ok(0)
        }
        Command::Annotate {
            transcript,
            out: target,
            fallback,
            record_llm,
            replay_llm,
            llm_url,
            llm_key,
            llm_model,
        } => {
            let t = Transcript::load(&transcript)?;
            let client;
            let annotator = if fallback {
                Annotator::Fallback
            } else {
                let transport: Arc<dyn LlmTransport> = match (&replay_llm, &llm_url) {
                    (Some(dir), _) => Arc::new(ReplayTransport::new(dir)),
                    (None, Some(url)) => Arc::new(HttpTransport::new(url, llm_key, Duration::from_secs(120))),
                    (None, None) => bail!("no model endpoint: set CONCH_LLM_URL, pass --replay-llm, or use --fallback"),
                };
                let transport: Arc<dyn LlmTransport> = match record_llm {
                    Some(dir) => Arc::new(RecordingTransport::new(transport, dir)?),
                    None => transport,
                };
                let mut config = LlmConfig { endpoint: llm_url.unwrap_or_default(), ..LlmConfig::default() };
                if let Some(model) = llm_model {
                    config.model = model;
                }
                if replay_llm.is_some() {
                    config.backoff_ms = 0;
                    config.max_retries = 0;
                }
                client = LlmClient::new(config, transport);
                Annotator::Llm(&client)
            };
            let output = annotate_transcript(&t, annotator)?;
            write_file(&target, &serialize_corpus(&output.corpus))?;
            let summary = serde_json::json!({
                "out": target,
                "stats": compute_stats(&output.corpus),
                "warnings": output.warnings,
                "calls": output.calls,
            });
            out.write_all(pretty(&summary).as_bytes())?;
            Ok(0)
        }
        Command::Layout { file, view, out: target, filters, config } => {
            let corpus = load(&file)?;
            let filter = FilterState::parse_args(&filters)?;
            let scene = build_view(&corpus, &layout_config(config.as_deref())?, &filter, view.into())?;
            write_file(&target, &pretty(&scene))?;
            Ok(0)
        }
        Command::Export { file, svg, view, filters, config } => {
            let corpus = load(&file)?;
            let filter = FilterState::parse_args(&filters)?;
            let scene = build_view(&corpus, &layout_config(config.as_deref())?, &filter, view.into())?;
            write_file(&svg, &render_svg(&scene))?;
            Ok(0)
        }
        Command::Serve { file, port, host, config } => {
            let corpus = load(&file)?;
            let config = layout_config(config.as_deref())?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(crate::serve(corpus, config, &host, port))?;
            Ok(0)
        }
    }
}
