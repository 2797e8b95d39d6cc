use super::*;
use crate::analytics::interactions_from_paths;
use crate::model::{CorpusBuilder, Side};

fn words(n: usize) -> String {
    (0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ") + "."
}

/// Three sessions, nine blocks, two clash points with paths on both.
fn fixture() -> DebateCorpus {
    let mut b = CorpusBuilder::new("fixture", "en");
    b.debater("a1", Side::Affirmative, "Ann").debater("n1", Side::Negative, "Ned");
    b.session("s1", "Opening").turn("t1", "a1").block("b1", &words(30)).block("b2", &words(25));
    b.tag("evidence", 0, 1).tag("reasoning", 0, 1);
    b.turn("t2", "n1").block("b3", &words(40));
    b.session("s2", "Cross").turn("t3", "a1").block("b4", &words(22)).block("b5", &words(35));
    b.tag("questioning", 0, 1);
    b.turn("t4", "n1").block("b6", &words(28)).block("b7", &words(31));
    b.tag("agreement", 0, 1).tag("evidence", 0, 1);
    b.session("s3", "Closing").turn("t5", "n1").block("b8", &words(50)).turn("t6", "a1").block("b9", &words(45));
    b.clash_point("cp1", "value first").clash_point("cp2", "market future");
    b.disagreement("d1", "cp1", "career first", ("ideal", "reality"), &["b1", "b3", "b5", "b8"])
        .disagreement("d2", "cp2", "market shifts", ("stable", "volatile"), &["b2", "b6", "b9"])
        .disagreement("d3", "cp1", "family duty", ("yes", "no"), &["b4", "b7"]);
    b.build()
}

fn scene(filter: &FilterState) -> SceneGraph {
    build_scene(&fixture(), &LayoutConfig::default(), filter).unwrap()
}

#[test]
fn unfiltered_chords_match_interactions() {
    let c = fixture();
    let s = build_scene(&c, &LayoutConfig::default(), &FilterState::default()).unwrap();
    assert_eq!(s.chords().len(), interactions_from_paths(&c).len());
    assert_eq!(s.chords().len(), 6);
    s.check(&c).unwrap();
}

#[test]
fn clash_filter_keeps_its_chords_in_its_color() {
    let c = fixture();
    let f = FilterState { clash_point: Some("cp1".into()), ..Default::default() };
    let s = build_scene(&c, &LayoutConfig::default(), &f).unwrap();
    let expected = interactions_from_paths(&c).iter().filter(|i| i.clash_point_id == "cp1").count();
    assert_eq!(s.chords().len(), expected);
    let key = c.clash_point(&"cp1".into()).unwrap().color_key;
    for ch in s.chords() {
        assert_eq!(ch.interaction_handle, Some(InteractionHandle::new(TargetKind::ClashPoint, "cp1")));
        let Shape::Chord { runs, .. } = &ch.shape else { unreachable!() };
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].style_ref, format!("clash-{key}"));
    }
    // blocks referencing cp1 are highlighted
    assert_eq!(s.highlight.blocks.iter().map(|b| b.as_str()).collect::<Vec<_>>(), ["b1", "b3", "b4", "b5", "b7", "b8"]);
}

#[test]
fn unknown_target_is_rejected() {
    let f = FilterState { clash_point: Some("cp999".into()), ..Default::default() };
    match build_scene(&fixture(), &LayoutConfig::default(), &f) {
        Err(SceneError::UnknownFilterTarget { kind, id }) => {
            assert_eq!(kind, TargetKind::ClashPoint);
            assert_eq!(id, "cp999");
        }
        other => panic!("{other:?}"),
    }
    let f = FilterState { block: Some("b99".into()), ..Default::default() };
    assert!(matches!(
        build_scene(&fixture(), &LayoutConfig::default(), &f),
        Err(SceneError::UnknownFilterTarget { kind: TargetKind::Block, .. })
    ));
}

fn highlighted_handles(s: &SceneGraph, kind: &str) -> Vec<String> {
    s.nodes()
        .into_iter()
        .filter(|n| n.kind() == kind && n.is_highlighted())
        .filter_map(|n| n.interaction_handle.as_ref().map(|h| h.target_id.clone()))
        .collect()
}

#[test]
fn session_selection_highlights_circle_spiral_and_row() {
    let s = scene(&FilterState { session: Some("s2".into()), ..Default::default() });
    let session = s.subtree("session").unwrap();
    let circles: Vec<_> = session.walk().into_iter().filter(|n| n.kind() == "circle" && n.is_highlighted()).collect();
    assert_eq!(circles.len(), 1);
    assert_eq!(circles[0].interaction_handle.as_ref().unwrap().target_id, "s2");
    let spiral: Vec<_> = s
        .subtree("process")
        .unwrap()
        .children
        .iter()
        .filter(|n| n.has_style("session-spiral") && n.is_highlighted())
        .collect();
    assert_eq!(spiral.len(), 1);
    assert_eq!(spiral[0].interaction_handle.as_ref().unwrap().target_id, "s2");
    let rows: Vec<_> = s
        .subtree("strategy")
        .unwrap()
        .children
        .iter()
        .filter(|n| n.has_style("strategy-row") && n.is_highlighted())
        .collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(s.highlight.listed_blocks.iter().map(|b| b.as_str()).collect::<Vec<_>>(), ["b4", "b5", "b6", "b7"]);
}

#[test]
fn session_then_block_equals_block() {
    let both = scene(&FilterState { session: Some("s2".into()), block: Some("b7".into()), ..Default::default() });
    let block = scene(&FilterState { block: Some("b7".into()), ..Default::default() });
    assert_eq!(both.highlight, block.highlight);
    for kind in ["circle", "spiralStroke", "rect", "arcBand", "chord"] {
        assert_eq!(highlighted_handles(&both, kind), highlighted_handles(&block, kind), "{kind}");
    }
    assert_eq!(block.highlight.scroll_to.as_ref().map(|b| b.as_str()), Some("b7"));
    // the block shows in all three views
    assert_eq!(highlighted_handles(&block, "spiralStroke"), ["s2", "b7"]);
    assert!(highlighted_handles(&block, "rect").iter().filter(|h| *h == "b7").count() >= 2);
}

#[test]
fn turn_selection_covers_its_blocks() {
    let s = scene(&FilterState { turn: Some("t4".into()), ..Default::default() });
    assert_eq!(s.highlight.blocks.iter().map(|b| b.as_str()).collect::<Vec<_>>(), ["b6", "b7"]);
    assert_eq!(s.highlight.sessions.iter().map(|b| b.as_str()).collect::<Vec<_>>(), ["s2"]);
    assert_eq!(s.highlight.scroll_to.as_ref().map(|b| b.as_str()), Some("b6"));
}

#[test]
fn every_block_once_as_sub_arc_and_card() {
    let c = fixture();
    let s = build_scene(&c, &LayoutConfig::default(), &FilterState::default()).unwrap();
    let process = s.subtree("process").unwrap().walk();
    let content = s.subtree("content").unwrap();
    for b in c.blocks() {
        let arcs = process
            .iter()
            .filter(|n| {
                n.kind() == "spiralStroke"
                    && n.interaction_handle == Some(InteractionHandle::new(TargetKind::Block, &b.id))
            })
            .count();
        assert_eq!(arcs, 1, "{}", b.id);
        let cards = content
            .children
            .iter()
            .filter(|n| n.interaction_handle == Some(InteractionHandle::new(TargetKind::Block, &b.id)))
            .count();
        assert_eq!(cards, 1);
        assert_eq!(s.cards.iter().filter(|card| card.block_id == b.id).count(), 1);
    }
    // one unit per strategy tag
    let units = s.subtree("strategy").unwrap().children.iter().filter(|n| n.has_style("unit")).count();
    assert_eq!(units, c.blocks().iter().map(|b| b.strategy_tags.len()).sum::<usize>());
}

#[test]
fn four_view_subtrees() {
    let s = scene(&FilterState::default());
    let ids: Vec<_> = s.root.children.iter().filter_map(|n| n.id.as_deref()).collect();
    assert_eq!(ids, SUBTREES);
    let process = s.clone().into_view(View::Process);
    assert!(process.subtree("strategy").is_none() && process.subtree("process").is_some());
    assert!(process.strategy.is_none() && process.cards.is_empty());
    let strategy = s.into_view(View::Strategy);
    assert!(strategy.subtree("process").is_none() && strategy.subtree("strategy").is_some());
}

#[test]
fn svg_is_deterministic_and_counts_match() {
    let s = scene(&FilterState { clash_point: Some("cp2".into()), ..Default::default() });
    let a = render_svg(&s);
    let b = render_svg(&scene(&FilterState { clash_point: Some("cp2".into()), ..Default::default() }));
    assert_eq!(a, b);
    for (kind, n) in s.count_by_kind() {
        assert_eq!(a.matches(&format!(r#"data-kind="{kind}""#)).count(), n, "{kind}");
    }
    assert!(a.starts_with("<svg ") && a.ends_with("</svg>\n"));
    assert!(!a.contains("NaN") && !a.contains("-0.0000"));
    assert!(a.contains(r#"data-target-kind="clashPoint" data-target-id="cp2""#));
}

#[test]
fn empty_corpus_draws_frame_and_legend_only() {
    let mut b = CorpusBuilder::new("empty", "en");
    b.debater("a1", Side::Affirmative, "A").debater("n1", Side::Negative, "N");
    let c = b.build();
    let s = build_scene(&c, &LayoutConfig::default(), &FilterState::default()).unwrap();
    for id in ["session", "process", "strategy", "content"] {
        assert!(s.subtree(id).unwrap().children.is_empty(), "{id}");
    }
    assert!(!s.subtree("legend").unwrap().children.is_empty());
    let svg = render_svg(&s);
    let drawn: Vec<&str> =
        svg.lines().filter(|l| l.contains("data-kind") && !l.contains(r#"data-kind="group""#)).collect();
    assert!(drawn.iter().any(|l| l.contains(r#"data-id="frame""#)));
    assert!(svg.contains(r#"data-id="legend""#));
    assert_eq!(drawn.len(), 1 + s.subtree("legend").unwrap().walk().len() - 1);
}

#[test]
fn json_round_trip() {
    let s = scene(&FilterState { session: Some("s1".into()), ..Default::default() });
    let json = serde_json::to_string(&s).unwrap();
    let back: SceneGraph = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let first_chord =
        &v["root"]["children"][3]["children"].as_array().unwrap().iter().find(|n| n["kind"] == "chord").unwrap()
            ["interactionHandle"];
    assert_eq!(first_chord["targetKind"], "clashPoint");
}

#[test]
fn filter_parsing() {
    let f = FilterState::from_pairs([("clashPoint", "cp1"), ("chordColorMode", "monoBySide")]).unwrap();
    assert_eq!(f.clash_point.as_ref().map(|c| c.as_str()), Some("cp1"));
    assert_eq!(f.chord_color_mode, ChordColorMode::MonoBySide);
    assert_eq!(f.effective_color_mode(), ChordColorMode::ClashColor);
    assert!(matches!(FilterState::from_pairs([("colour", "x")]), Err(FilterParseError::UnknownKey(_))));
    assert!(matches!(FilterState::from_pairs([("block", "b1"), ("block", "b2")]), Err(FilterParseError::Duplicate(_))));
    assert!(matches!(FilterState::from_pairs([("chordColorMode", "rainbow")]), Err(FilterParseError::BadColorMode(_))));
    assert!(matches!(FilterState::parse_args(&["clashPoint"]), Err(FilterParseError::Malformed(_))));
    assert_eq!(FilterState::parse_args(&["session=s1"]).unwrap().session.as_ref().map(|s| s.as_str()), Some("s1"));
}

#[test]
fn block_context_neighbours() {
    let c = fixture();
    let ctx = block_context(&c, &"b7".into(), 1).unwrap();
    assert_eq!(ctx.block.block_id, "b7");
    assert_eq!(ctx.before.iter().map(|c| c.block_id.as_str()).collect::<Vec<_>>(), ["b6"]);
    assert_eq!(ctx.after.iter().map(|c| c.block_id.as_str()).collect::<Vec<_>>(), ["b8"]);
    assert_eq!(ctx.block.debater_label, "DEBATER N1");
    assert_eq!(ctx.block.viewpoints[0].viewpoint, "no");
    let edge = block_context(&c, &"b1".into(), 3).unwrap();
    assert!(edge.before.is_empty());
    assert_eq!(edge.after.len(), 3);
    assert!(block_context(&c, &"zz".into(), 1).is_none());
}

#[test]
fn cards_segment_text_at_strategy_boundaries() {
    let mut b = CorpusBuilder::new("cards", "en");
    b.debater("a1", Side::Affirmative, "A").debater("n1", Side::Negative, "N");
    b.session("s1", "x").turn("t1", "a1").block("b1", "First point. Second point. Third point.");
    b.tag("evidence", 1, 2);
    let c = b.build();
    let card = content_card(&c, &"b1".into()).unwrap();
    let texts: Vec<&str> = card.segments.iter().map(|s| s.text.as_str()).collect();
    assert_eq!(texts, ["First point.", "Second point.", "Third point."]);
    assert!(card.segments[0].strategies.is_empty());
    assert_eq!(card.segments[1].strategies[0].id, "evidence");
    assert_eq!(card.segments[1].strategies[0].name, "Refutation through Evidence");
}
