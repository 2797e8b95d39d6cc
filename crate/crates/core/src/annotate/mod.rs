//! Turning raw transcripts into annotated corpora.
//!
//! Steps run in order: segment turns into blocks, label strategies, extract
//! clash points and disagreements, assign them to blocks, then build
//! disagreement paths. Each model-backed step has an offline rule, so the
//! whole pipeline can run without network access. Model calls go through
//! [`LlmClient`], which retries, logs and can record or replay responses.

mod client;
mod fallback;
mod metrics;
mod steps;
mod transcript;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{
    corpus_from_document, BlockDoc, ClashPointDoc, CorpusDocument, DisagreementDoc, SessionDoc, TurnDoc,
};
use crate::model::{BlockId, DebateCorpus, DisagreementId, Namespace, StrategyCatalog, ValidationReport};

pub use client::{
    sha256_hex, CallRecord, LlmClient, LlmConfig, LlmRequest, LlmTransport, LlmUnavailable, Recording,
    RecordingTransport, ReplayTransport, TransportError,
};
pub use fallback::{fallback_cuts, label_with_keywords, KeywordTable, SENTENCES_PER_BLOCK};
pub use metrics::{fleiss_kappa, precision, MetricError, RatingMatrix};
pub use steps::{
    assign_references, build_paths, extract_clash_structure, label_strategies, segment_turn, Annotator, ClashStructure,
    DraftBlock, SegmentedBlock, StepContext,
};
pub use transcript::{
    AuthoredClashPoint, AuthoredDisagreement, Transcript, TranscriptError, TranscriptSession, TranscriptTurn,
};

#[derive(Debug, Error)]
pub enum AnnotateError {
    #[error("turn {turn} has no text")]
    EmptyTurn { turn: String },
    #[error(transparent)]
    LlmUnavailable(#[from] LlmUnavailable),
    #[error("unusable model output for {prompt_id}: {message}")]
    LlmOutputUnparsable { prompt_id: String, message: String },
    #[error("model output for {prompt_id} names unknown strategy {strategy_id:?}")]
    UnknownStrategyId { prompt_id: String, strategy_id: String },
    #[error("{namespace:?} phrase {phrase:?} has {words} words, expected {min} to {max}")]
    SchemaViolation { namespace: Namespace, phrase: String, words: usize, min: usize, max: usize },
    #[error("annotated corpus is invalid ({} errors)", report.errors.len())]
    InvalidCorpus { report: Box<ValidationReport> },
}

/// Conditions the pipeline repaired on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum AnnotationWarning {
    ShortBlockReferencesDropped { block_id: BlockId, content_length: usize },
    DisagreementUnreferenced { disagreement_id: DisagreementId },
}

#[derive(Debug)]
pub struct AnnotationOutput {
    pub corpus: DebateCorpus,
    pub report: ValidationReport,
    pub warnings: Vec<AnnotationWarning>,
    /// Model calls made, sorted by prompt id. Empty offline.
    pub calls: Vec<CallRecord>,
}

/// Runs every step over a transcript. Output depends only on the
/// transcript and on the set of model responses, never on their arrival
/// order.
pub fn annotate_transcript(
    transcript: &Transcript,
    annotator: Annotator<'_>,
) -> Result<AnnotationOutput, AnnotateError> {
    let catalog = transcript
        .strategy_catalog
        .clone()
        .map(StrategyCatalog::new)
        .unwrap_or_else(StrategyCatalog::default_refutation);
    let language = transcript.competition.language.clone();
    let mut ctx = StepContext::new(&language, catalog);
    ctx.keywords = KeywordTable::default().with_overrides(&transcript.strategy_keywords);

    // Segmentation, one request per turn.
    let turns: Vec<(&TranscriptSession, &TranscriptTurn)> =
        transcript.sessions.iter().flat_map(|s| s.turns.iter().map(move |t| (s, t))).collect();
    let segment_replies: Vec<Option<String>> = match annotator {
        Annotator::Fallback => vec![None; turns.len()],
        Annotator::Llm(client) => {
            let reqs: Vec<Option<LlmRequest>> =
                turns.iter().map(|(_, t)| steps::segment_request(&ctx, client, &t.id, &t.text)).collect();
            let live: Vec<LlmRequest> = reqs.iter().flatten().cloned().collect();
            let mut answers = client.call_all(&live).into_iter();
            let mut out = Vec::with_capacity(reqs.len());
            for r in &reqs {
                out.push(match r {
                    Some(_) => Some(answers.next().expect("one answer per request")?),
                    None => None,
                });
            }
            out
        }
    };
    let llm = matches!(annotator, Annotator::Llm(_));
    let mut blocks: Vec<DraftBlock> = Vec::new();
    for ((s, t), reply) in turns.iter().zip(&segment_replies) {
        for seg in steps::segment_with_reply(&ctx, &t.id, &t.text, reply.as_deref(), llm)? {
            blocks.push(DraftBlock {
                id: BlockId::new(format!("b{}", blocks.len() + 1)),
                session_id: s.id.clone(),
                turn_id: t.id.clone(),
                debater_id: t.debater_id.clone(),
                text: seg.text,
                content_length: seg.content_length,
                too_short_for_clash: seg.too_short_for_clash,
                strategy_tags: Vec::new(),
                clash_point_ids: Vec::new(),
                disagreement_ids: Vec::new(),
            });
        }
    }

    // Strategy labels, one request per block.
    let label_replies: Vec<Option<String>> = match annotator {
        Annotator::Fallback => vec![None; blocks.len()],
        Annotator::Llm(client) => {
            let reqs: Vec<LlmRequest> =
                blocks.iter().map(|b| steps::label_request(&ctx, client, &b.id, &b.text)).collect();
            client.call_all(&reqs).into_iter().map(|r| r.map(Some)).collect::<Result<_, _>>()?
        }
    };
    for (b, reply) in blocks.iter_mut().zip(&label_replies) {
        b.strategy_tags = steps::label_with_reply(&ctx, &b.id, &b.text, reply.as_deref())?;
    }

    let texts: Vec<(BlockId, &str)> = blocks.iter().map(|b| (b.id.clone(), b.text.as_str())).collect();
    let mut structure = extract_clash_structure(&ctx, annotator, &texts, &transcript.clash_points)?;
    drop(texts);
    let mut warnings = assign_references(annotator, &mut blocks, &structure)?;
    let (paths, path_warnings) = build_paths(annotator, &mut blocks, &mut structure)?;
    warnings.extend(path_warnings);

    let doc = assemble(transcript, &ctx, &blocks, &structure, &paths);
    let ingested = corpus_from_document(doc);
    if !ingested.report.is_valid() {
        return Err(AnnotateError::InvalidCorpus { report: Box::new(ingested.report) });
    }
    let calls = match annotator {
        Annotator::Llm(client) => client.call_log(),
        Annotator::Fallback => Vec::new(),
    };
    Ok(AnnotationOutput { corpus: ingested.corpus, report: ingested.report, warnings, calls })
}

fn assemble(
    transcript: &Transcript,
    ctx: &StepContext,
    blocks: &[DraftBlock],
    structure: &ClashStructure,
    paths: &[(DisagreementId, Vec<BlockId>)],
) -> CorpusDocument {
    let sessions = transcript
        .sessions
        .iter()
        .enumerate()
        .map(|(i, s)| SessionDoc {
            id: s.id.clone(),
            index: s.index.unwrap_or(i as u32),
            title: s.title.clone(),
            turns: s
                .turns
                .iter()
                .map(|t| TurnDoc {
                    id: t.id.clone(),
                    debater_id: t.debater_id.clone(),
                    blocks: blocks
                        .iter()
                        .filter(|b| b.turn_id == t.id)
                        .map(|b| BlockDoc {
                            id: b.id.clone(),
                            text: b.text.clone(),
                            content_length: Some(b.content_length),
                            sentence_spans: None,
                            strategy_tags: b.strategy_tags.clone(),
                            clash_point_ids: b.clash_point_ids.clone(),
                            disagreement_ids: b.disagreement_ids.clone(),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    let clash_points = structure
        .clash_points
        .iter()
        .map(|c| ClashPointDoc {
            id: c.id.clone(),
            label: c.label.clone(),
            disagreements: c
                .disagreements
                .iter()
                .map(|d| DisagreementDoc {
                    id: d.id.clone(),
                    label: d.label.clone(),
                    affirmative_viewpoint: d.affirmative_viewpoint.clone(),
                    negative_viewpoint: d.negative_viewpoint.clone(),
                    path: paths.iter().find(|(id, _)| id == &d.id).map(|(_, p)| p.clone()).unwrap_or_default(),
                })
                .collect(),
        })
        .collect();
    CorpusDocument {
        competition: transcript.competition.clone(),
        content_metric: ctx.metric,
        debaters: transcript.debaters.clone(),
        sessions,
        clash_points,
        strategy_catalog: ctx.catalog.entries.clone(),
    }
}

#[cfg(test)]
mod tests;
