//! Referential and structural validation of a corpus.
//!
//! Violations are data: [`validate_corpus`] never fails, it returns a
//! report whose `errors` decide validity and whose `warnings` flag softer
//! rules such as clash references on very short blocks.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{tokenizer_for_language, DebateCorpus, PhraseTokenizer, SentenceRange, Side};
use crate::text;

/// Blocks below this content length are too short to carry clash points.
pub const DEFAULT_SHORT_BLOCK_THRESHOLD: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Namespace {
    Debater,
    Session,
    Turn,
    Block,
    ClashPoint,
    Disagreement,
    Strategy,
    IconKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Issue {
    DuplicateId {
        namespace: Namespace,
        id: String,
    },
    DanglingReference {
        namespace: Namespace,
        id: String,
        referenced_from: String,
    },
    MissingSide {
        side: Side,
    },
    OrdinalsNotContiguous {
        side: Side,
        ordinals: Vec<u32>,
    },
    DuplicateSessionIndex {
        index: u32,
    },
    EmptySession {
        session: String,
    },
    EmptyTurn {
        turn: String,
    },
    /// A turn or block is claimed by more than one parent, or a child's back
    /// reference disagrees with its parent.
    MembershipConflict {
        id: String,
        detail: String,
    },
    SideMismatch {
        block: String,
    },
    ContentLengthMismatch {
        block: String,
        stored: usize,
        computed: usize,
    },
    ClashParentMissing {
        block: String,
        disagreement: String,
        clash_point: String,
    },
    InvalidSentenceSpans {
        block: String,
        sentences: usize,
    },
    StrategyRangeOutOfBounds {
        block: String,
        strategy: String,
        range: [usize; 2],
        sentences: usize,
    },
    ShortBlockClashReference {
        block: String,
        content_length: usize,
        threshold: usize,
    },
    PhraseLength {
        namespace: Namespace,
        id: String,
        phrase: String,
        words: usize,
        min: usize,
        max: usize,
    },
    EmptyPath {
        disagreement: String,
    },
    PathNotChronological {
        disagreement: String,
    },
    PathBlockMissingReference {
        disagreement: String,
        block: String,
    },
    ReferenceOffPath {
        disagreement: String,
        block: String,
    },
    ClashDisagreementMismatch {
        clash_point: String,
        disagreement: String,
    },
    DuplicateColorKey {
        clash_point: String,
        color_key: usize,
    },
    MetricLanguageMismatch {
        language: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    /// Warnings become errors (`--strict`).
    pub fn into_strict(mut self) -> Self {
        self.errors.append(&mut self.warnings);
        self
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.errors.extend(other.errors);
        self.warnings.extend(other.warnings);
    }
}

pub struct ValidationOptions {
    pub short_block_threshold: usize,
    /// Word counter for phrase-length rules; `None` picks one from the
    /// corpus language tag.
    pub tokenizer: Option<Box<dyn PhraseTokenizer>>,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { short_block_threshold: DEFAULT_SHORT_BLOCK_THRESHOLD, tokenizer: None }
    }
}

pub fn validate_corpus(corpus: &DebateCorpus) -> ValidationReport {
    validate_corpus_with(corpus, &ValidationOptions::default())
}

pub fn validate_corpus_with(corpus: &DebateCorpus, opts: &ValidationOptions) -> ValidationReport {
    let mut v = Validator { corpus, report: ValidationReport::default() };
    let language_tokenizer;
    let tokenizer: &dyn PhraseTokenizer = match &opts.tokenizer {
        Some(t) => t.as_ref(),
        None => {
            language_tokenizer = tokenizer_for_language(&corpus.competition().language);
            language_tokenizer.as_ref()
        }
    };
    v.duplicates();
    v.debaters();
    v.sessions_and_turns();
    v.blocks(opts.short_block_threshold);
    v.clash_structure(tokenizer);
    v.report
}

struct Validator<'a> {
    corpus: &'a DebateCorpus,
    report: ValidationReport,
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut dups = Vec::new();
    for id in ids {
        if !seen.insert(id) && !dups.iter().any(|d: &String| d == id) {
            dups.push(id.to_string());
        }
    }
    dups
}

impl Validator<'_> {
    fn error(&mut self, issue: Issue) {
        self.report.errors.push(issue);
    }

    fn warn(&mut self, issue: Issue) {
        self.report.warnings.push(issue);
    }

    fn dangling(&mut self, namespace: Namespace, id: &str, from: &str) {
        self.error(Issue::DanglingReference { namespace, id: id.to_string(), referenced_from: from.to_string() });
    }

    fn duplicates(&mut self) {
        let c = self.corpus;
        let groups: Vec<(Namespace, Vec<String>)> = vec![
            (Namespace::Debater, duplicates(c.debaters().iter().map(|d| d.id.as_str()))),
            (Namespace::Session, duplicates(c.sessions().iter().map(|s| s.id.as_str()))),
            (Namespace::Turn, duplicates(c.turns().iter().map(|t| t.id.as_str()))),
            (Namespace::Block, duplicates(c.blocks().iter().map(|b| b.id.as_str()))),
            (Namespace::ClashPoint, duplicates(c.clash_points().iter().map(|x| x.id.as_str()))),
            (Namespace::Disagreement, duplicates(c.disagreements().iter().map(|x| x.id.as_str()))),
            (Namespace::Strategy, duplicates(c.strategy_catalog().entries.iter().map(|e| e.id.as_str()))),
            (Namespace::IconKey, duplicates(c.strategy_catalog().entries.iter().map(|e| e.icon_key.as_str()))),
        ];
        for (namespace, ids) in groups {
            for id in ids {
                self.error(Issue::DuplicateId { namespace, id });
            }
        }
    }

    fn debaters(&mut self) {
        for side in Side::BOTH {
            let mut ordinals: Vec<u32> =
                self.corpus.debaters().iter().filter(|d| d.side == side).map(|d| d.ordinal.get()).collect();
            if ordinals.is_empty() {
                self.error(Issue::MissingSide { side });
                continue;
            }
            ordinals.sort_unstable();
            let contiguous = ordinals.iter().enumerate().all(|(i, &o)| o as usize == i + 1);
            if !contiguous {
                self.error(Issue::OrdinalsNotContiguous { side, ordinals });
            }
        }
        let language = &self.corpus.competition().language;
        if super::ContentMetric::for_language(language) != self.corpus.content_metric() {
            self.warn(Issue::MetricLanguageMismatch { language: language.clone() });
        }
    }

    fn sessions_and_turns(&mut self) {
        let c = self.corpus;
        let mut seen_index = BTreeSet::new();
        for s in c.sessions() {
            if !seen_index.insert(s.index) {
                self.error(Issue::DuplicateSessionIndex { index: s.index });
            }
        }

        let mut turn_owner: HashMap<&str, &str> = HashMap::new();
        for s in c.sessions() {
            if s.turn_ids.is_empty() {
                self.error(Issue::EmptySession { session: s.id.to_string() });
            }
            for tid in &s.turn_ids {
                let Some(turn) = c.turn(tid) else {
                    self.dangling(Namespace::Turn, tid.as_str(), s.id.as_str());
                    continue;
                };
                if let Some(prev) = turn_owner.insert(tid.as_str(), s.id.as_str()) {
                    self.error(Issue::MembershipConflict {
                        id: tid.to_string(),
                        detail: format!("listed in sessions {prev} and {}", s.id),
                    });
                }
                if turn.session_id != s.id {
                    self.error(Issue::MembershipConflict {
                        id: tid.to_string(),
                        detail: format!("belongs to {} but listed in {}", turn.session_id, s.id),
                    });
                }
            }
        }

        let mut block_owner: HashMap<&str, &str> = HashMap::new();
        for t in c.turns() {
            if !turn_owner.contains_key(t.id.as_str()) {
                self.error(Issue::MembershipConflict {
                    id: t.id.to_string(),
                    detail: "turn belongs to no session".into(),
                });
            }
            if c.debater(&t.debater_id).is_none() {
                self.dangling(Namespace::Debater, t.debater_id.as_str(), t.id.as_str());
            }
            if t.block_ids.is_empty() {
                self.error(Issue::EmptyTurn { turn: t.id.to_string() });
            }
            for bid in &t.block_ids {
                let Some(block) = c.block(bid) else {
                    self.dangling(Namespace::Block, bid.as_str(), t.id.as_str());
                    continue;
                };
                if let Some(prev) = block_owner.insert(bid.as_str(), t.id.as_str()) {
                    self.error(Issue::MembershipConflict {
                        id: bid.to_string(),
                        detail: format!("listed in turns {prev} and {}", t.id),
                    });
                }
                if block.turn_id != t.id || block.session_id != t.session_id || block.debater_id != t.debater_id {
                    self.error(Issue::MembershipConflict {
                        id: bid.to_string(),
                        detail: format!("back references disagree with turn {}", t.id),
                    });
                }
            }
        }
        for b in c.blocks() {
            if !block_owner.contains_key(b.id.as_str()) {
                self.error(Issue::MembershipConflict {
                    id: b.id.to_string(),
                    detail: "block belongs to no turn".into(),
                });
            }
        }
    }

    fn blocks(&mut self, short_threshold: usize) {
        let c = self.corpus;
        let metric = c.content_metric();
        for b in c.blocks() {
            if let Some(d) = c.debater(&b.debater_id) {
                if d.side != b.side {
                    self.error(Issue::SideMismatch { block: b.id.to_string() });
                }
            }
            let computed = metric.measure(&b.text);
            if computed != b.content_length {
                self.error(Issue::ContentLengthMismatch {
                    block: b.id.to_string(),
                    stored: b.content_length,
                    computed,
                });
            }

            let sentences = text::sentence_count(&b.text);
            if !spans_partition(&b.sentence_spans, sentences) {
                self.error(Issue::InvalidSentenceSpans { block: b.id.to_string(), sentences });
            }
            for tag in &b.strategy_tags {
                if c.strategy_catalog().get(&tag.strategy_id).is_none() {
                    self.dangling(Namespace::Strategy, tag.strategy_id.as_str(), b.id.as_str());
                }
                let r = tag.sentence_range;
                if r.is_empty() || r.end > sentences {
                    self.error(Issue::StrategyRangeOutOfBounds {
                        block: b.id.to_string(),
                        strategy: tag.strategy_id.to_string(),
                        range: r.into(),
                        sentences,
                    });
                }
            }

            for cid in &b.clash_point_ids {
                if c.clash_point(cid).is_none() {
                    self.dangling(Namespace::ClashPoint, cid.as_str(), b.id.as_str());
                }
            }
            for did in &b.disagreement_ids {
                match c.disagreement(did) {
                    None => self.dangling(Namespace::Disagreement, did.as_str(), b.id.as_str()),
                    Some(d) => {
                        if !b.clash_point_ids.contains(&d.clash_point_id) {
                            self.error(Issue::ClashParentMissing {
                                block: b.id.to_string(),
                                disagreement: did.to_string(),
                                clash_point: d.clash_point_id.to_string(),
                            });
                        }
                        if !d.path.contains(&b.id) {
                            self.error(Issue::ReferenceOffPath {
                                disagreement: did.to_string(),
                                block: b.id.to_string(),
                            });
                        }
                    }
                }
            }
            if b.content_length < short_threshold && !b.clash_point_ids.is_empty() {
                self.warn(Issue::ShortBlockClashReference {
                    block: b.id.to_string(),
                    content_length: b.content_length,
                    threshold: short_threshold,
                });
            }
        }
    }

    fn clash_structure(&mut self, tokenizer: &dyn PhraseTokenizer) {
        let c = self.corpus;
        let mut color_keys = HashSet::new();
        for cp in c.clash_points() {
            self.phrase(tokenizer, Namespace::ClashPoint, cp.id.as_str(), &cp.label, 2, 4);
            if !color_keys.insert(cp.color_key) {
                self.error(Issue::DuplicateColorKey { clash_point: cp.id.to_string(), color_key: cp.color_key });
            }
            for did in &cp.disagreement_ids {
                match c.disagreement(did) {
                    None => self.dangling(Namespace::Disagreement, did.as_str(), cp.id.as_str()),
                    Some(d) if d.clash_point_id != cp.id => self.error(Issue::ClashDisagreementMismatch {
                        clash_point: cp.id.to_string(),
                        disagreement: did.to_string(),
                    }),
                    Some(_) => {}
                }
            }
        }

        for d in c.disagreements() {
            let id = d.id.as_str();
            match c.clash_point(&d.clash_point_id) {
                None => self.dangling(Namespace::ClashPoint, d.clash_point_id.as_str(), id),
                Some(cp) if !cp.disagreement_ids.contains(&d.id) => self.error(Issue::ClashDisagreementMismatch {
                    clash_point: cp.id.to_string(),
                    disagreement: id.to_string(),
                }),
                Some(_) => {}
            }
            self.phrase(tokenizer, Namespace::Disagreement, id, &d.label, 2, 3);
            self.phrase(tokenizer, Namespace::Disagreement, id, &d.affirmative_viewpoint, 1, 1);
            self.phrase(tokenizer, Namespace::Disagreement, id, &d.negative_viewpoint, 1, 1);

            if d.path.is_empty() {
                self.error(Issue::EmptyPath { disagreement: id.to_string() });
            }
            let mut last_rank: Option<usize> = None;
            let mut ordered = true;
            for bid in &d.path {
                let Some(rank) = c.block_rank(bid) else {
                    self.dangling(Namespace::Block, bid.as_str(), id);
                    continue;
                };
                if last_rank.is_some_and(|prev| prev >= rank) {
                    ordered = false;
                }
                last_rank = Some(rank);
                if !c.blocks()[rank].disagreement_ids.contains(&d.id) {
                    self.error(Issue::PathBlockMissingReference {
                        disagreement: id.to_string(),
                        block: bid.to_string(),
                    });
                }
            }
            if !ordered {
                self.error(Issue::PathNotChronological { disagreement: id.to_string() });
            }
        }
    }

    fn phrase(
        &mut self,
        tokenizer: &dyn PhraseTokenizer,
        namespace: Namespace,
        id: &str,
        phrase: &str,
        min: usize,
        max: usize,
    ) {
        let words = tokenizer.count_words(phrase);
        if words < min || words > max {
            self.error(Issue::PhraseLength {
                namespace,
                id: id.to_string(),
                phrase: phrase.to_string(),
                words,
                min,
                max,
            });
        }
    }
}

/// Spans are non-empty, ordered, contiguous and cover `[0, sentences)`.
pub(crate) fn spans_partition(spans: &[SentenceRange], sentences: usize) -> bool {
    if sentences == 0 {
        return spans.is_empty();
    }
    let mut next = 0;
    for s in spans {
        if s.start != next || s.end <= s.start {
            return false;
        }
        next = s.end;
    }
    next == sentences
}
