use super::*;
use crate::model::CorpusBuilder;

fn text(words: usize) -> String {
    let mut s = vec!["point"; words].join(" ");
    s.push('.');
    s
}

/// Two sessions; aff a1/a2, neg n1/n2.
fn fixture() -> DebateCorpus {
    let mut b = CorpusBuilder::new("t", "en");
    b.debater("a1", Side::Affirmative, "A1")
        .debater("a2", Side::Affirmative, "A2")
        .debater("n1", Side::Negative, "N1")
        .debater("n2", Side::Negative, "N2");
    b.session("s1", "Opening")
        .turn("t1", "a1")
        .block("b1", &text(30))
        .block("b2", &text(30))
        .turn("t2", "n1")
        .block("b3", &text(25))
        .block("b4", &text(25));
    b.session("s2", "Rebuttal")
        .turn("t3", "a2")
        .block("b5", &text(40))
        .block("b6", &text(40))
        .turn("t4", "n2")
        .block("b7", &text(20))
        .block("b9", &text(22));
    b.clash_point("cp1", "Value Prioritization")
        .clash_point("cp2", "Future Predictability")
        .clash_point("cp3", "Path to Happiness");
    b.disagreement("d1", "cp1", "career first", ("ideal", "reality"), &["b1", "b4", "b5"])
        .disagreement("d2", "cp2", "market shifts", ("stable", "volatile"), &["b2", "b6"])
        .disagreement("d3", "cp3", "happiness source", ("passion", "income"), &["b3"]);
    b.clash_reference("b2", "cp1");
    b.build()
}

#[test]
fn fixture_is_valid() {
    let r = crate::model::validate_corpus(&fixture());
    assert!(r.is_valid(), "{:?}", r.errors);
}

#[test]
fn consecutive_pairs_become_interactions() {
    let c = fixture();
    let xs = interactions_from_paths(&c);
    assert_eq!(xs.len(), 3);
    assert_eq!((xs[0].from_block_id.as_str(), xs[0].to_block_id.as_str(), xs[0].same_side), ("b1", "b4", false));
    assert_eq!((xs[1].from_block_id.as_str(), xs[1].to_block_id.as_str(), xs[1].same_side), ("b4", "b5", false));
    assert_eq!((xs[2].from_block_id.as_str(), xs[2].to_block_id.as_str(), xs[2].same_side), ("b2", "b6", true));
    // singleton d3 yields nothing
    assert!(xs.iter().all(|x| x.disagreement_id != "d3"));
}

#[test]
fn shares_normalize_block_counts() {
    let c = fixture();
    let s1 = clash_point_shares(&c, &"s1".into());
    // s1: b1 cp1, b2 cp1+cp2, b3 cp3, b4 cp1
    let got: Vec<(&str, f64)> = s1.iter().map(|s| (s.clash_point_id.as_str(), s.share)).collect();
    assert_eq!(got, vec![("cp1", 0.6), ("cp2", 0.2), ("cp3", 0.2)]);
    let sum: f64 = s1.iter().map(|s| s.share).sum();
    assert!((sum - 1.0).abs() < 1e-12);
}

#[test]
fn shares_examples() {
    let mut b = CorpusBuilder::new("t", "en");
    b.debater("a1", Side::Affirmative, "A").debater("n1", Side::Negative, "N");
    b.session("s1", "x").turn("t1", "a1");
    for i in 0..4 {
        b.block(&format!("b{i}"), &text(30));
    }
    b.session("s2", "y").turn("t2", "n1").block("c0", &text(30));
    b.clash_point("cp1", "first clash").clash_point("cp2", "second clash").clash_point("cp3", "third clash");
    b.clash_reference("b0", "cp1")
        .clash_reference("b1", "cp1")
        .clash_reference("b2", "cp2")
        .clash_reference("b3", "cp3");
    let c = b.build();
    let got: Vec<(String, f64)> =
        clash_point_shares(&c, &"s1".into()).into_iter().map(|s| (s.clash_point_id.to_string(), s.share)).collect();
    assert_eq!(got, vec![("cp1".into(), 0.5), ("cp2".into(), 0.25), ("cp3".into(), 0.25)]);
    assert!(clash_point_shares(&c, &"s2".into()).is_empty());
}

#[test]
fn disagreement_counts_per_session() {
    let c = fixture();
    let s1 = disagreement_block_counts(&c, &"s1".into());
    let got: Vec<(&str, usize)> = s1.iter().map(|d| (d.disagreement_id.as_str(), d.count)).collect();
    assert_eq!(got, vec![("d1", 2), ("d2", 1), ("d3", 1)]);
    let s2 = disagreement_block_counts(&c, &"s2".into());
    // d3 only lives in s1
    assert!(s2.iter().all(|d| d.disagreement_id != "d3"));
}

#[test]
fn side_proportion_examples() {
    let mut b = CorpusBuilder::new("t", "en");
    b.debater("a1", Side::Affirmative, "A").debater("n1", Side::Negative, "N");
    b.session("s1", "x")
        .turn("t1", "a1")
        .block("b1", &vec!["w"; 300].join(" "))
        .turn("t2", "n1")
        .block("b2", &vec!["w"; 100].join(" "));
    b.session("s2", "y").turn("t3", "a1").block("b3", "only one side here");
    b.session("s3", "z").turn("t4", "a1").block("b4", "a b").turn("t5", "n1").block("b5", "c d");
    let c = b.build();
    let p = side_proportions(&c, &"s1".into()).unwrap();
    assert_eq!((p.affirmative, p.negative), (0.75, 0.25));
    let p = side_proportions(&c, &"s2".into()).unwrap();
    assert_eq!((p.affirmative, p.negative), (1.0, 0.0));
    let p = side_proportions(&c, &"s3".into()).unwrap();
    assert_eq!((p.affirmative, p.negative), (0.5, 0.5));
}

fn tagged(sessions: &[&[&[&str]]]) -> DebateCorpus {
    let mut b = CorpusBuilder::new("t", "en");
    b.debater("a1", Side::Affirmative, "A").debater("n1", Side::Negative, "N");
    let mut n = 0;
    for (si, blocks) in sessions.iter().enumerate() {
        b.session(&format!("s{si}"), "x").turn(&format!("t{si}"), "n1");
        for tags in blocks.iter() {
            n += 1;
            b.block(&format!("b{n}"), "One. Two. Three.");
            for (k, tag) in tags.iter().enumerate() {
                b.tag(tag, k % 3, k % 3 + 1);
            }
        }
    }
    b.build()
}

#[test]
fn usage_and_peaks() {
    let c = tagged(&[
        &[&["evidence"], &["evidence", "evidence"]],
        &[&["evidence"]],
        &[&["evidence", "evidence"], &["evidence", "evidence", "evidence"], &["reasoning"]],
    ]);
    let usage = strategy_usage(&c);
    let ev = usage.strategy_position(&"evidence".into()).unwrap();
    let totals: Vec<usize> = (0..3).map(|s| usage.session_total(s, ev)).collect();
    assert_eq!(totals, vec![3, 1, 5]);
    let peaks = peak_usage(&usage);
    let got: Vec<(&str, usize)> = peaks.iter().map(|p| (p.strategy_id.as_str(), p.peak)).collect();
    // unused strategies are excluded, catalog order kept
    assert_eq!(got, vec![("reasoning", 1), ("evidence", 5)]);
}

#[test]
fn cooccurrence_groups_keep_multiplicity() {
    let c = tagged(&[&[
        &["reasoning", "evidence"],
        &["evidence", "reasoning"],
        &["reasoning"],
        &["reasoning", "reasoning"],
    ]]);
    let groups = cooccurrence(&c);
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].multiplicity(), 2);
    assert_eq!(groups[0].side, Side::Negative);
    let ids: Vec<&str> = groups[0].strategy_ids.iter().map(|s| s.as_str()).collect();
    assert_eq!(ids, vec!["reasoning", "evidence"]);
}

#[test]
fn analyze_is_serializable() {
    let report = analyze(&fixture());
    let json = serde_json::to_string(&report).unwrap();
    assert!(json.contains("\"interactions\""));
    assert_eq!(report.sessions.len(), 2);
}
