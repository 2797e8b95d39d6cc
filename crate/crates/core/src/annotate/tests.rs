use std::sync::Arc;

use super::steps::DraftBlock;
use super::*;
use crate::ingest::serialize_corpus;
use crate::model::{ClashPointId, Competition, Debater, DisagreementId, SentenceRange, Side, StrategyCatalog};

fn ctx() -> StepContext {
    StepContext::new("en", StrategyCatalog::default_refutation())
}

fn mock(reply: impl Fn(&LlmRequest) -> String + Send + Sync + 'static) -> LlmClient {
    let t = move |r: &LlmRequest| Ok(reply(r));
    LlmClient::new(LlmConfig { backoff_ms: 0, ..Default::default() }, Arc::new(t))
}

fn sentence(i: usize) -> String {
    format!("Sentence number {i} has exactly seven words. ")
}

#[test]
fn fallback_segments_every_three_sentences() {
    let text: String = (0..6).map(sentence).collect();
    let blocks = segment_turn(&ctx(), Annotator::Fallback, &"t1".into(), &text).unwrap();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks.iter().map(|b| b.text.as_str()).collect::<Vec<_>>().join(" "), text.trim());
    assert!(blocks.iter().all(|b| b.content_length == 21 && !b.too_short_for_clash));
}

#[test]
fn short_turn_is_one_flagged_block() {
    let blocks = segment_turn(&ctx(), Annotator::Fallback, &"t1".into(), "Too short. Really short.").unwrap();
    assert_eq!(blocks.len(), 1);
    assert!(blocks[0].too_short_for_clash);
    assert!(matches!(
        segment_turn(&ctx(), Annotator::Fallback, &"t1".into(), "  "),
        Err(AnnotateError::EmptyTurn { .. })
    ));
}

#[test]
fn model_cuts_split_sentences() {
    let text: String = (0..4).map(sentence).collect();
    let client = mock(|_| r#"{"cuts": [2]}"#.into());
    let blocks = segment_turn(&ctx(), Annotator::Llm(&client), &"t1".into(), &text).unwrap();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].text, format!("{}{}", sentence(0), sentence(1)).trim());
    assert_eq!(client.call_log()[0].prompt_id, "segment/t1");
    let bad = mock(|_| r#"{"cuts": [0]}"#.into());
    assert!(matches!(
        segment_turn(&ctx(), Annotator::Llm(&bad), &"t1".into(), &text),
        Err(AnnotateError::LlmOutputUnparsable { .. })
    ));
    let prose = mock(|_| "Sure! Here are the cuts.".into());
    assert!(segment_turn(&ctx(), Annotator::Llm(&prose), &"t1".into(), &text).is_err());
}

#[test]
fn model_labels() {
    let client = mock(|_| r#"{"tags": [{"strategyId": "evidence", "range": [0, 1]}]}"#.into());
    let tags = label_strategies(&ctx(), Annotator::Llm(&client), &"b1".into(), "One. Two.").unwrap();
    assert_eq!(tags.len(), 1);
    assert_eq!(tags[0].strategy_id, "evidence");
    assert_eq!(tags[0].sentence_range, SentenceRange::new(0, 1));
    let unknown = mock(|_| r#"{"tags": [{"strategyId": "bluffing", "range": [0, 1]}]}"#.into());
    assert!(matches!(
        label_strategies(&ctx(), Annotator::Llm(&unknown), &"b1".into(), "One. Two."),
        Err(AnnotateError::UnknownStrategyId { .. })
    ));
    let agreement = label_strategies(&ctx(), Annotator::Fallback, &"b1".into(), "I agree with you. But no.").unwrap();
    assert_eq!(agreement[0].strategy_id, "agreement");
}

fn extract_reply(clash: &str, vp: &str) -> String {
    format!(
        r#"{{"clashPoints": [{{"label": "{clash}", "disagreements": [{{"label": "career first", "affirmative": "{vp}", "negative": "reality"}}]}}]}}"#
    )
}

#[test]
fn extraction_checks_phrase_lengths() {
    let ok = mock(|_| extract_reply("Value Prioritization", "ideal"));
    let s = extract_clash_structure(&ctx(), Annotator::Llm(&ok), &[], &[]).unwrap();
    assert_eq!(s.clash_points[0].label, "Value Prioritization");
    assert_eq!(s.clash_points[0].id, "cp1");
    assert_eq!(s.clash_points[0].disagreements[0].affirmative_viewpoint, "ideal");

    let long = mock(|_| extract_reply("one two three four five", "ideal"));
    match extract_clash_structure(&ctx(), Annotator::Llm(&long), &[], &[]) {
        Err(AnnotateError::SchemaViolation { phrase, words, .. }) => {
            assert_eq!(phrase, "one two three four five");
            assert_eq!(words, 5);
        }
        other => panic!("{other:?}"),
    }
    let two_word_viewpoint = mock(|_| extract_reply("Value Prioritization", "very ideal"));
    assert!(extract_clash_structure(&ctx(), Annotator::Llm(&two_word_viewpoint), &[], &[]).is_err());
}

#[test]
fn extraction_merges_duplicate_labels() {
    let client = mock(|_| {
        r#"{"clashPoints": [
            {"label": "Value Prioritization", "disagreements": [{"label": "career first", "affirmative": "ideal", "negative": "reality"}]},
            {"label": "Value Prioritization", "disagreements": [{"label": "market shifts", "affirmative": "stable", "negative": "volatile"}]}
        ]}"#
        .into()
    });
    let s = extract_clash_structure(&ctx(), Annotator::Llm(&client), &[], &[]).unwrap();
    assert_eq!(s.clash_points.len(), 1);
    let ids: Vec<&str> = s.clash_points[0].disagreements.iter().map(|d| d.id.as_str()).collect();
    assert_eq!(ids, vec!["d1", "d2"]);
}

fn structure() -> ClashStructure {
    ClashStructure {
        clash_points: vec![AuthoredClashPoint {
            id: "cp1".into(),
            label: "Value Prioritization".into(),
            cues: vec![],
            disagreements: vec![
                AuthoredDisagreement {
                    id: "d1".into(),
                    label: "career first".into(),
                    affirmative_viewpoint: "ideal".into(),
                    negative_viewpoint: "reality".into(),
                    cues: vec![],
                },
                AuthoredDisagreement {
                    id: "d2".into(),
                    label: "market shifts".into(),
                    affirmative_viewpoint: "stable".into(),
                    negative_viewpoint: "volatile".into(),
                    cues: vec![],
                },
            ],
        }],
    }
}

fn draft(id: &str, words: usize) -> DraftBlock {
    DraftBlock {
        id: id.into(),
        session_id: "s1".into(),
        turn_id: "t1".into(),
        debater_id: "a1".into(),
        text: vec!["word"; words].join(" "),
        content_length: words,
        too_short_for_clash: words < 20,
        strategy_tags: vec![],
        clash_point_ids: vec![],
        disagreement_ids: vec![],
    }
}

#[test]
fn short_block_assignment_dropped() {
    let client = mock(|_| r#"{"clashPointIds": ["cp1"]}"#.into());
    let mut blocks = vec![draft("b1", 15)];
    let warnings = assign_references(Annotator::Llm(&client), &mut blocks, &structure()).unwrap();
    assert!(blocks[0].clash_point_ids.is_empty());
    assert_eq!(
        warnings,
        vec![AnnotationWarning::ShortBlockReferencesDropped { block_id: "b1".into(), content_length: 15 }]
    );
}

#[test]
fn disagreement_implies_its_clash_point() {
    let client = mock(|_| r#"{"disagreementIds": ["d2"]}"#.into());
    let mut blocks = vec![draft("b1", 30), draft("b2", 30)];
    assign_references(Annotator::Llm(&client), &mut blocks, &structure()).unwrap();
    for b in &blocks {
        assert_eq!(b.clash_point_ids, vec![ClashPointId::from("cp1")]);
        assert_eq!(b.disagreement_ids, vec![DisagreementId::from("d2")]);
    }
    let bad = mock(|_| r#"{"disagreementIds": ["d9"]}"#.into());
    assert!(assign_references(Annotator::Llm(&bad), &mut blocks, &structure()).is_err());
}

#[test]
fn offline_assignment_matches_phrases() {
    let mut blocks = vec![draft("b1", 25), draft("b2", 25)];
    blocks[0].text.push_str(" the ideal matters more");
    blocks[1].text.push_str(" on Value Prioritization alone");
    assign_references(Annotator::Fallback, &mut blocks, &structure()).unwrap();
    assert_eq!(blocks[0].disagreement_ids, vec![DisagreementId::from("d1")]);
    assert_eq!(blocks[0].clash_point_ids, vec![ClashPointId::from("cp1")]);
    assert!(blocks[1].disagreement_ids.is_empty());
    assert_eq!(blocks[1].clash_point_ids, vec![ClashPointId::from("cp1")]);
}

fn with_refs(ids: &[&str], refs: &[&str]) -> Vec<DraftBlock> {
    ids.iter()
        .map(|id| {
            let mut b = draft(id, 30);
            if refs.contains(id) {
                b.clash_point_ids = vec!["cp1".into()];
                b.disagreement_ids = vec!["d1".into()];
            }
            b
        })
        .collect()
}

#[test]
fn fallback_paths_are_chronological() {
    // chronological order b2 < b7 < b9
    let mut blocks = with_refs(&["b2", "b5", "b7", "b9"], &["b7", "b2", "b9"]);
    let mut s = structure();
    let (paths, warnings) = build_paths(Annotator::Fallback, &mut blocks, &mut s).unwrap();
    assert_eq!(paths, vec![("d1".into(), vec!["b2".into(), "b7".into(), "b9".into()])]);
    // d2 had no references
    assert_eq!(warnings, vec![AnnotationWarning::DisagreementUnreferenced { disagreement_id: "d2".into() }]);
    assert_eq!(s.clash_points[0].disagreements.len(), 1);
}

#[test]
fn singleton_path() {
    let mut blocks = with_refs(&["b1"], &["b1"]);
    let (paths, _) = build_paths(Annotator::Fallback, &mut blocks, &mut structure()).unwrap();
    assert_eq!(paths[0].1, vec![BlockId::from("b1")]);
}

#[test]
fn model_pruned_path_stays_sorted() {
    let client = mock(|_| r#"{"path": ["b9", "b2"]}"#.into());
    let mut blocks = with_refs(&["b2", "b7", "b9"], &["b2", "b7", "b9"]);
    let (paths, _) = build_paths(Annotator::Llm(&client), &mut blocks, &mut structure()).unwrap();
    assert_eq!(paths[0].1, vec![BlockId::from("b2"), BlockId::from("b9")]);
    // the pruned block no longer claims the disagreement
    assert!(blocks[1].disagreement_ids.is_empty());
    assert_eq!(blocks[1].clash_point_ids, vec![ClashPointId::from("cp1")]);
}

fn transcript() -> Transcript {
    let long = |topic: &str| {
        format!(
            "We believe the {topic} question matters because people choose careers for many reasons. \
             According to a recent survey, most graduates value income first. \
             Why should anyone ignore that data? The ideal of passion is appealing. \
             But reality pays the rent every month. I agree that passion helps, yet it is not enough."
        )
    };
    Transcript {
        competition: Competition { name: "Demo".into(), language: "en".into(), format: "test".into() },
        debaters: vec![
            Debater {
                id: "a1".into(),
                side: Side::Affirmative,
                ordinal: 1.try_into().unwrap(),
                display_name: "A".into(),
            },
            Debater { id: "n1".into(), side: Side::Negative, ordinal: 1.try_into().unwrap(), display_name: "N".into() },
        ],
        sessions: vec![
            TranscriptSession {
                id: "s1".into(),
                index: None,
                title: "Opening".into(),
                turns: vec![
                    TranscriptTurn { id: "t1".into(), debater_id: "a1".into(), text: long("career") },
                    TranscriptTurn { id: "t2".into(), debater_id: "n1".into(), text: long("salary") },
                ],
            },
            TranscriptSession {
                id: "s2".into(),
                index: None,
                title: "Closing".into(),
                turns: vec![TranscriptTurn { id: "t3".into(), debater_id: "a1".into(), text: "Thank you all.".into() }],
            },
        ],
        strategy_catalog: None,
        clash_points: structure().clash_points,
        strategy_keywords: Default::default(),
    }
}

#[test]
fn fallback_pipeline_is_deterministic() {
    let t = transcript();
    let a = annotate_transcript(&t, Annotator::Fallback).unwrap();
    let b = annotate_transcript(&t, Annotator::Fallback).unwrap();
    assert_eq!(serialize_corpus(&a.corpus), serialize_corpus(&b.corpus));
    assert!(a.report.is_valid());
    assert!(a.corpus.blocks().len() >= 5);
    let d1 = a.corpus.disagreement(&"d1".into()).unwrap();
    assert!(d1.path.len() >= 2);
    // "market shifts" is never mentioned
    assert!(a.corpus.disagreement(&"d2".into()).is_none());
}

#[test]
fn model_pipeline_with_mock() {
    let client = mock(|r| {
        let id = r.prompt_id.as_str();
        if id.starts_with("segment/") {
            r#"{"cuts": [2, 4]}"#.into()
        } else if id.starts_with("label/") {
            r#"{"tags": [{"strategyId": "reasoning", "range": [0, 1]}]}"#.into()
        } else if id == "extract" {
            extract_reply("Value Prioritization", "ideal")
        } else if id.starts_with("assign/") {
            r#"{"disagreementIds": ["d1"]}"#.into()
        } else {
            r#"{"path": ["b1", "b4"]}"#.into()
        }
    });
    let out = annotate_transcript(&transcript(), Annotator::Llm(&client)).unwrap();
    let d1 = out.corpus.disagreement(&"d1".into()).unwrap();
    assert_eq!(d1.path, vec![BlockId::from("b1"), BlockId::from("b4")]);
    assert!(out.calls.iter().any(|c| c.prompt_id == "extract"));
    assert!(out.calls.windows(2).all(|w| w[0].prompt_id <= w[1].prompt_id));
}
