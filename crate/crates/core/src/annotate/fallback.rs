//! Offline rules used in place of model calls.

use std::collections::BTreeMap;

use crate::model::{SentenceRange, StrategyCatalog, StrategyId, StrategyTag};

/// Sentences per block when segmenting without a model.
pub const SENTENCES_PER_BLOCK: usize = 3;

/// Marker lexemes per strategy id. Matching is case-insensitive; markers
/// made of ASCII letters must match whole words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordTable {
    markers: BTreeMap<StrategyId, Vec<String>>,
}

impl Default for KeywordTable {
    fn default() -> Self {
        let table: [(&str, &[&str]); 6] = [
            ("agreement", &["i agree", "we agree", "admittedly", "granted", "indeed", "同意", "确实", "承认"]),
            ("reasoning", &["because", "therefore", "thus", "hence", "it follows", "因为", "所以", "因此"]),
            (
                "evidence",
                &[
                    "according to",
                    "data",
                    "study",
                    "studies",
                    "survey",
                    "statistics",
                    "percent",
                    "%",
                    "数据",
                    "研究",
                    "调查",
                    "根据",
                ],
            ),
            ("ignoring", &["irrelevant", "beside the point", "not the issue", "无关", "不是重点"]),
            ("questioning", &["?", "？", "why", "how can", "为什么", "难道"]),
            ("reframing", &["in other words", "the real question", "what this really means", "换句话说", "其实"]),
        ];
        Self {
            markers: table
                .iter()
                .map(|(id, words)| (StrategyId::new(*id), words.iter().map(|w| w.to_string()).collect()))
                .collect(),
        }
    }
}

impl KeywordTable {
    pub fn with_overrides(mut self, overrides: &BTreeMap<StrategyId, Vec<String>>) -> Self {
        for (id, words) in overrides {
            self.markers.insert(id.clone(), words.iter().map(|w| w.to_lowercase()).collect());
        }
        self
    }

    pub fn matches(&self, strategy: &StrategyId, sentence: &str) -> bool {
        let lower = sentence.to_lowercase();
        self.markers.get(strategy).is_some_and(|ms| ms.iter().any(|m| contains_marker(&lower, m)))
    }
}

/// Case-folded containment; ASCII-word markers need word boundaries.
pub(crate) fn contains_marker(haystack_lower: &str, marker: &str) -> bool {
    let marker = marker.to_lowercase();
    if marker.is_empty() {
        return false;
    }
    let wordy = marker.chars().next().is_some_and(|c| c.is_ascii_alphanumeric());
    if !wordy {
        return haystack_lower.contains(&marker);
    }
    let bytes = haystack_lower.as_bytes();
    haystack_lower.match_indices(&marker).any(|(i, m)| {
        let before = i == 0 || !bytes[i - 1].is_ascii_alphanumeric();
        let end = i + m.len();
        let after = end >= bytes.len() || !bytes[end].is_ascii_alphanumeric();
        before && after
    })
}

/// Groups sentence indices into blocks of `SENTENCES_PER_BLOCK`.
pub fn fallback_cuts(sentences: usize) -> Vec<usize> {
    (1..sentences).filter(|i| i % SENTENCES_PER_BLOCK == 0).collect()
}

/// Tags each sentence with every strategy whose markers it contains, in
/// catalog order, merging runs of adjacent sentences with the same
/// strategy into one range.
pub fn label_with_keywords(sentences: &[&str], catalog: &StrategyCatalog, table: &KeywordTable) -> Vec<StrategyTag> {
    let mut tags = Vec::new();
    for entry in &catalog.entries {
        let mut start: Option<usize> = None;
        for (i, s) in sentences.iter().enumerate() {
            let hit = table.matches(&entry.id, s);
            match (hit, start) {
                (true, None) => start = Some(i),
                (false, Some(s0)) => {
                    tags.push(StrategyTag { strategy_id: entry.id.clone(), sentence_range: SentenceRange::new(s0, i) });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s0) = start {
            tags.push(StrategyTag {
                strategy_id: entry.id.clone(),
                sentence_range: SentenceRange::new(s0, sentences.len()),
            });
        }
    }
    tags.sort_by_key(|t| (t.sentence_range.start, catalog.position(&t.strategy_id)));
    tags
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cuts_every_three() {
        assert_eq!(fallback_cuts(6), vec![3]);
        assert_eq!(fallback_cuts(7), vec![3, 6]);
        assert!(fallback_cuts(3).is_empty());
    }

    #[test]
    fn word_boundaries() {
        assert!(contains_marker("we need more data here", "data"));
        assert!(!contains_marker("please update it", "data"));
        assert!(contains_marker("这是数据", "数据"));
    }

    #[test]
    fn agreement_marker_tags_its_sentence() {
        let catalog = StrategyCatalog::default_refutation();
        let tags =
            label_with_keywords(&["Fine.", "I agree with that part.", "Next."], &catalog, &KeywordTable::default());
        assert_eq!(tags.len(), 1);
        assert_eq!(tags[0].strategy_id, "agreement");
        assert_eq!(tags[0].sentence_range, SentenceRange::new(1, 2));
    }

    #[test]
    fn no_markers_no_tags() {
        let catalog = StrategyCatalog::default_refutation();
        assert!(
            label_with_keywords(&["Plain words.", "More plain words."], &catalog, &KeywordTable::default()).is_empty()
        );
    }

    #[test]
    fn adjacent_sentences_merge() {
        let catalog = StrategyCatalog::default_refutation();
        let tags = label_with_keywords(&["Because A.", "Therefore B.", "C."], &catalog, &KeywordTable::default());
        assert_eq!(tags.len(), 1);
        assert_eq!(tags[0].sentence_range, SentenceRange::new(0, 2));
    }
}
