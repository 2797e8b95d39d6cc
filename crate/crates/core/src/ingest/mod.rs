//! Corpus file format: parsing, serialization, content lengths and
//! corpus statistics.
//!
//! The canonical format is one JSON document that nests sessions, turns and
//! blocks, with clash points carrying their disagreements and paths. Stored
//! text is the source of truth: content lengths and clash palette slots are
//! always recomputed on ingest.

mod schema;
mod stats;

use std::path::Path;

use thiserror::Error;

use crate::model::{
    assign_color_keys, default_sentence_spans, validate_corpus, Block, ClashPoint, ContentMetric, CorpusParts,
    DebateCorpus, Disagreement, Issue, Session, Side, StrategyCatalog, Turn, ValidationReport,
};

pub use schema::{BlockDoc, ClashPointDoc, CorpusDocument, DisagreementDoc, SessionDoc, TurnDoc};
pub use stats::{compute_stats, CorpusStats, SessionLength, SideLengths};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    MalformedDocument { line: usize, column: usize, message: String },
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("duplicate id {id:?}")]
    DuplicateId { id: String, report: Box<ValidationReport> },
    #[error("dangling reference to {id:?}")]
    DanglingReference { id: String, report: Box<ValidationReport> },
    #[error("invalid corpus ({} errors)", report.errors.len())]
    Invalid { report: Box<ValidationReport> },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl IngestError {
    /// Validation report attached to referential failures.
    pub fn report(&self) -> Option<&ValidationReport> {
        match self {
            IngestError::DuplicateId { report, .. }
            | IngestError::DanglingReference { report, .. }
            | IngestError::Invalid { report } => Some(report),
            _ => None,
        }
    }
}

/// A parsed corpus with the warnings raised while ingesting it.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub corpus: DebateCorpus,
    pub report: ValidationReport,
}

/// Content length of `text` under `metric`.
pub fn content_length(text: &str, metric: ContentMetric) -> usize {
    metric.measure(text)
}

/// Syntax and schema checks only.
pub fn parse_document(document: &[u8]) -> Result<CorpusDocument, IngestError> {
    serde_json::from_slice(document).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => IngestError::SchemaViolation(e.to_string()),
            _ => IngestError::MalformedDocument { line: e.line(), column: e.column(), message: e.to_string() },
        }
    })
}

/// Builds the in-memory corpus and validates it. Never fails: problems end
/// up in the report.
pub fn corpus_from_document(doc: CorpusDocument) -> Ingested {
    let CorpusDocument { competition, content_metric, debaters, sessions, clash_points, strategy_catalog } = doc;
    let mut warnings = Vec::new();

    let mut parts = CorpusParts {
        competition,
        content_metric,
        debaters,
        sessions: Vec::with_capacity(sessions.len()),
        turns: Vec::new(),
        blocks: Vec::new(),
        clash_points: Vec::with_capacity(clash_points.len()),
        disagreements: Vec::new(),
        strategy_catalog: StrategyCatalog::new(strategy_catalog),
    };

    for s in sessions {
        let mut turn_ids = Vec::with_capacity(s.turns.len());
        for t in s.turns {
            let side =
                parts.debaters.iter().find(|d| d.id == t.debater_id).map(|d| d.side).unwrap_or(Side::Affirmative);
            let mut block_ids = Vec::with_capacity(t.blocks.len());
            for b in t.blocks {
                let computed = content_metric.measure(&b.text);
                if let Some(stored) = b.content_length {
                    if stored != computed {
                        warnings.push(Issue::ContentLengthMismatch { block: b.id.to_string(), stored, computed });
                    }
                }
                let sentence_spans = b
                    .sentence_spans
                    .unwrap_or_else(|| default_sentence_spans(crate::text::sentence_count(&b.text), &b.strategy_tags));
                block_ids.push(b.id.clone());
                parts.blocks.push(Block {
                    id: b.id,
                    session_id: s.id.clone(),
                    turn_id: t.id.clone(),
                    debater_id: t.debater_id.clone(),
                    side,
                    text: b.text,
                    content_length: computed,
                    strategy_tags: b.strategy_tags,
                    clash_point_ids: b.clash_point_ids,
                    disagreement_ids: b.disagreement_ids,
                    sentence_spans,
                });
            }
            turn_ids.push(t.id.clone());
            parts.turns.push(Turn { id: t.id, session_id: s.id.clone(), debater_id: t.debater_id, block_ids });
        }
        parts.sessions.push(Session { id: s.id, index: s.index, title: s.title, turn_ids });
    }

    for cp in clash_points {
        let mut disagreement_ids = Vec::with_capacity(cp.disagreements.len());
        for d in cp.disagreements {
            disagreement_ids.push(d.id.clone());
            parts.disagreements.push(Disagreement {
                id: d.id,
                clash_point_id: cp.id.clone(),
                label: d.label,
                affirmative_viewpoint: d.affirmative_viewpoint,
                negative_viewpoint: d.negative_viewpoint,
                path: d.path,
            });
        }
        parts.clash_points.push(ClashPoint { id: cp.id, label: cp.label, color_key: 0, disagreement_ids });
    }
    assign_color_keys(&mut parts);

    let corpus = DebateCorpus::new(parts);
    let mut report = validate_corpus(&corpus);
    report.warnings.splice(0..0, warnings);
    Ingested { corpus, report }
}

/// Parses and validates a corpus document. Referential failures are
/// surfaced as errors carrying the full report; warnings travel with the
/// returned corpus.
pub fn parse_corpus(document: &[u8]) -> Result<Ingested, IngestError> {
    let ingested = corpus_from_document(parse_document(document)?);
    if ingested.report.is_valid() {
        return Ok(ingested);
    }
    let report = Box::new(ingested.report);
    let err = match report.errors.first() {
        Some(Issue::DuplicateId { id, .. }) => IngestError::DuplicateId { id: id.clone(), report },
        Some(Issue::DanglingReference { id, .. }) => IngestError::DanglingReference { id: id.clone(), report },
        _ => IngestError::Invalid { report },
    };
    Err(err)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Ingested, IngestError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io { path: path.display().to_string(), source })?;
    parse_corpus(&bytes)
}

/// Nested file representation of a corpus.
pub fn document_from_corpus(corpus: &DebateCorpus) -> CorpusDocument {
    let sessions = corpus
        .sessions()
        .iter()
        .map(|s| SessionDoc {
            id: s.id.clone(),
            index: s.index,
            title: s.title.clone(),
            turns: s
                .turn_ids
                .iter()
                .filter_map(|tid| corpus.turn(tid))
                .map(|t| TurnDoc {
                    id: t.id.clone(),
                    debater_id: t.debater_id.clone(),
                    blocks: t
                        .block_ids
                        .iter()
                        .filter_map(|bid| corpus.block(bid))
                        .map(|b| BlockDoc {
                            id: b.id.clone(),
                            text: b.text.clone(),
                            content_length: Some(b.content_length),
                            sentence_spans: Some(b.sentence_spans.clone()),
                            strategy_tags: b.strategy_tags.clone(),
                            clash_point_ids: b.clash_point_ids.clone(),
                            disagreement_ids: b.disagreement_ids.clone(),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    let clash_points = corpus
        .clash_points()
        .iter()
        .map(|cp| ClashPointDoc {
            id: cp.id.clone(),
            label: cp.label.clone(),
            disagreements: cp
                .disagreement_ids
                .iter()
                .filter_map(|did| corpus.disagreement(did))
                .map(|d| DisagreementDoc {
                    id: d.id.clone(),
                    label: d.label.clone(),
                    affirmative_viewpoint: d.affirmative_viewpoint.clone(),
                    negative_viewpoint: d.negative_viewpoint.clone(),
                    path: d.path.clone(),
                })
                .collect(),
        })
        .collect();
    CorpusDocument {
        competition: corpus.competition().clone(),
        content_metric: corpus.content_metric(),
        debaters: corpus.debaters().to_vec(),
        sessions,
        clash_points,
        strategy_catalog: corpus.strategy_catalog().entries.clone(),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize_corpus(corpus: &DebateCorpus) -> String {
    let mut out = serde_json::to_string_pretty(&document_from_corpus(corpus)).expect("corpus serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
      "competition": {"name": "mini", "language": "en", "format": "test"},
      "contentMetric": {"mode": "whitespaceTokens"},
      "debaters": [
        {"id": "a1", "side": "affirmative", "ordinal": 1, "displayName": "Ann"},
        {"id": "n1", "side": "negative", "ordinal": 1, "displayName": "Ned"}
      ],
      "sessions": [{"id": "s1", "index": 1, "title": "Opening", "turns": [
        {"id": "t1", "debaterId": "a1", "blocks": [
          {"id": "b1", "text": "We open. Our case is simple.", "strategyTags": [], "clashPointIds": [], "disagreementIds": []}
        ]}
      ]}],
      "clashPoints": [],
      "strategyCatalog": []
    }"#;

    #[test]
    fn minimal_document_ingests() {
        let ing = parse_corpus(MINIMAL.as_bytes()).unwrap();
        let c = &ing.corpus;
        assert_eq!((c.sessions().len(), c.turns().len(), c.blocks().len()), (1, 1, 1));
        assert_eq!(c.blocks()[0].content_length, 6);
        assert_eq!(c.blocks()[0].sentence_spans.len(), 1);
        assert!(ing.report.errors.is_empty());
        assert!(ing.report.warnings.is_empty());
    }

    #[test]
    fn content_length_examples() {
        assert_eq!(content_length("hello world", ContentMetric::WHITESPACE), 2);
        assert_eq!(content_length("辩论很有趣", ContentMetric::GRAPHEMES), 5);
        assert_eq!(content_length("", ContentMetric::WHITESPACE), 0);
        assert_eq!(content_length("", ContentMetric::GRAPHEMES), 0);
    }

    #[test]
    fn syntax_error_is_malformed() {
        let err = parse_corpus(b"{\"competition\": ").unwrap_err();
        assert!(matches!(err, IngestError::MalformedDocument { .. }), "{err}");
    }

    #[test]
    fn extra_or_missing_fields_are_schema_violations() {
        let extra = MINIMAL.replacen("\"clashPoints\": []", "\"clashPoints\": [], \"bogus\": 1", 1);
        assert!(matches!(parse_corpus(extra.as_bytes()), Err(IngestError::SchemaViolation(_))));
        let missing = MINIMAL.replacen("\"strategyCatalog\": []", "\"x\": []", 1);
        assert!(matches!(parse_corpus(missing.as_bytes()), Err(IngestError::SchemaViolation(_))));
    }

    #[test]
    fn duplicate_block_id() {
        let doc = MINIMAL.replacen(
            r#"{"id": "b1", "text": "We open. Our case is simple.", "strategyTags": [], "clashPointIds": [], "disagreementIds": []}"#,
            r#"{"id": "b1", "text": "One.", "strategyTags": [], "clashPointIds": [], "disagreementIds": []},
               {"id": "b1", "text": "Two.", "strategyTags": [], "clashPointIds": [], "disagreementIds": []}"#,
            1,
        );
        match parse_corpus(doc.as_bytes()) {
            Err(IngestError::DuplicateId { id, .. }) => assert_eq!(id, "b1"),
            other => panic!("expected duplicate id, got {other:?}"),
        }
    }

    #[test]
    fn dangling_disagreement_reference() {
        let doc = MINIMAL.replacen("\"disagreementIds\": []", "\"disagreementIds\": [\"d99\"]", 1);
        let err = parse_corpus(doc.as_bytes()).unwrap_err();
        let report = err.report().unwrap();
        assert!(report.errors.iter().any(|e| matches!(e,
            Issue::DanglingReference { id, .. } if id == "d99")));
    }

    #[test]
    fn stored_length_mismatch_is_a_warning() {
        let doc = MINIMAL.replacen("\"text\": \"We open.", "\"contentLength\": 99, \"text\": \"We open.", 1);
        let ing = parse_corpus(doc.as_bytes()).unwrap();
        assert_eq!(ing.corpus.blocks()[0].content_length, 6);
        assert!(matches!(ing.report.warnings[0], Issue::ContentLengthMismatch { stored: 99, computed: 6, .. }));
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let ing = parse_corpus(MINIMAL.as_bytes()).unwrap();
        let text = serialize_corpus(&ing.corpus);
        let again = parse_corpus(text.as_bytes()).unwrap();
        assert_eq!(again.corpus, ing.corpus);
        assert_eq!(serialize_corpus(&again.corpus), text);
    }
}
