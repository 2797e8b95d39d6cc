use super::*;
use crate::analytics::{cross_side_fraction, interactions_from_paths};
use crate::ingest::compute_stats;
use crate::model::validate_corpus;

#[test]
fn same_seed_same_corpus() {
    assert_eq!(random_corpus(7).parts(), random_corpus(7).parts());
    assert_ne!(random_corpus(7).parts(), random_corpus(8).parts());
}

#[test]
fn random_corpora_are_valid_and_in_range() {
    for seed in 0..40 {
        let c = random_corpus(seed);
        let report = validate_corpus(&c);
        assert!(report.errors.is_empty() && report.warnings.is_empty(), "seed {seed}: {report:?}");
        assert!((1..=15).contains(&c.sessions().len()));
        for s in c.sessions() {
            assert!((1..=40).contains(&c.session_blocks(&s.id).count()));
        }
    }
}

#[test]
fn case_pattern_presets_separate() {
    for seed in 0..10 {
        let one = cross_side_fraction(&interactions_from_paths(&one_sided_corpus(seed))).unwrap();
        let heavy = cross_side_fraction(&interactions_from_paths(&interaction_heavy_corpus(seed))).unwrap();
        assert!(one < 0.2, "seed {seed}: {one}");
        assert!(heavy > 0.6, "seed {seed}: {heavy}");
    }
}

#[test]
fn icdi_shape_matches_table() {
    let c = icdi_shape();
    assert!(validate_corpus(&c).is_valid(), "{:?}", validate_corpus(&c));
    let stats = compute_stats(&c);
    let m = IcdiManifest::default();
    assert_eq!((stats.debater_count, stats.session_count, stats.turn_count), (m.debaters, m.sessions, m.turns));
    assert_eq!(m.turns, 181);
    let total = c.total_content_length() as f64;
    let declared = m.declared_content_length as f64;
    assert!((total - declared).abs() <= m.content_length_tolerance * declared, "{total}");
}

#[test]
fn demo_corpora_are_clean() {
    for c in [demo_corpus(), demo_corpus_zh()] {
        let report = validate_corpus(&c);
        assert!(report.errors.is_empty() && report.warnings.is_empty(), "{report:?}");
    }
}

#[test]
fn icdi_total_is_frozen() {
    assert_eq!(icdi_shape().total_content_length(), 12_060);
}

#[test]
fn demo_transcript_annotates_both_ways() {
    use crate::annotate::{annotate_transcript, Annotator, LlmClient, LlmConfig};
    use crate::ingest::serialize_corpus;
    use std::sync::Arc;

    let t = demo_transcript();
    let a = annotate_transcript(&t, Annotator::Fallback).unwrap();
    let b = annotate_transcript(&t, Annotator::Fallback).unwrap();
    assert_eq!(serialize_corpus(&a.corpus), serialize_corpus(&b.corpus));
    assert!(!interactions_from_paths(&a.corpus).is_empty());

    let client = LlmClient::new(LlmConfig::default(), Arc::new(ScriptedModel::for_transcript(&t)));
    let m = annotate_transcript(&t, Annotator::Llm(&client)).unwrap();
    assert!(!interactions_from_paths(&m.corpus).is_empty());
    assert_ne!(m.corpus.blocks().len(), a.corpus.blocks().len());
    assert!(m.calls.iter().any(|c| c.prompt_id == "extract"));
}
