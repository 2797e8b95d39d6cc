//! Hierarchical debate data model.
//!
//! A [`DebateCorpus`] holds one competition: sessions contain turns, turns
//! contain blocks, and blocks carry strategy tags plus references into the
//! clash-point / disagreement structure. The corpus keeps its blocks in
//! chronological order, so a block's position in [`DebateCorpus::blocks`] is
//! its chronological rank.

mod builder;
mod ids;
mod validate;
mod words;

use std::collections::HashMap;
use std::fmt;
use std::num::NonZeroU32;

use serde::{Deserialize, Serialize};

pub use builder::{assign_color_keys, default_sentence_spans, CorpusBuilder};
pub use ids::{BlockId, ClashPointId, DebaterId, DisagreementId, SessionId, StrategyId, TurnId};
pub use validate::{
    validate_corpus, validate_corpus_with, Issue, Namespace, ValidationOptions, ValidationReport,
    DEFAULT_SHORT_BLOCK_THRESHOLD,
};
pub use words::{tokenizer_for_language, GraphemeGroupTokenizer, PhraseTokenizer, WhitespaceTokenizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Affirmative,
    Negative,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Affirmative, Side::Negative];

    /// Letter used in debater identifiers.
    pub fn letter(self) -> char {
        match self {
            Side::Affirmative => 'A',
            Side::Negative => 'N',
        }
    }

    /// Fixed rendering color: affirmative is white, negative is black.
    pub fn color(self) -> &'static str {
        match self {
            Side::Affirmative => "#ffffff",
            Side::Negative => "#000000",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Affirmative => 0,
            Side::Negative => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Affirmative => "affirmative",
            Side::Negative => "negative",
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Affirmative => Side::Negative,
            Side::Negative => Side::Affirmative,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Debater {
    pub id: DebaterId,
    pub side: Side,
    /// Speaking order within the side, starting at 1.
    pub ordinal: NonZeroU32,
    pub display_name: String,
}

impl Debater {
    /// Identifier shown on content cards, e.g. `DEBATER A1`.
    pub fn display_identifier(&self) -> String {
        display_identifier(self.side, self.ordinal)
    }
}

pub fn display_identifier(side: Side, ordinal: NonZeroU32) -> String {
    format!("DEBATER {}{}", side.letter(), ordinal)
}

/// Half-open range of sentence indices `[start, end)`, serialized as `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct SentenceRange {
    pub start: usize,
    pub end: usize,
}

impl SentenceRange {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &SentenceRange) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl From<[usize; 2]> for SentenceRange {
    fn from([start, end]: [usize; 2]) -> Self {
        Self { start, end }
    }
}

impl From<SentenceRange> for [usize; 2] {
    fn from(r: SentenceRange) -> Self {
        [r.start, r.end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StrategyTag {
    pub strategy_id: StrategyId,
    pub sentence_range: SentenceRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StrategyEntry {
    pub id: StrategyId,
    pub name: String,
    pub icon_key: String,
    pub description: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyCatalog {
    pub entries: Vec<StrategyEntry>,
}

impl StrategyCatalog {
    pub fn new(entries: Vec<StrategyEntry>) -> Self {
        Self { entries }
    }

    pub fn get(&self, id: &StrategyId) -> Option<&StrategyEntry> {
        self.entries.iter().find(|e| &e.id == id)
    }

    /// Position of a strategy in the catalog; used as the deterministic
    /// tie-breaker wherever strategies are ordered.
    pub fn position(&self, id: &StrategyId) -> Option<usize> {
        self.entries.iter().position(|e| &e.id == id)
    }

    /// The six-entry catalog shipped with the annotation pipeline.
    pub fn default_refutation() -> Self {
        let entry = |id: &str, name: &str, icon: &str, desc: &str| StrategyEntry {
            id: StrategyId::new(id),
            name: name.to_string(),
            icon_key: icon.to_string(),
            description: desc.to_string(),
        };
        Self::new(vec![
            entry(
                "agreement",
                "Refutation through Agreement",
                "handshake",
                "Concede part of the opposing claim, then turn it to support one's own side.",
            ),
            entry(
                "reasoning",
                "Refutation through Reasoning",
                "gears",
                "Expose a logical flaw in the opposing argument.",
            ),
            entry(
                "evidence",
                "Refutation through Evidence",
                "document",
                "Counter the opposing claim with data, studies or examples.",
            ),
            entry(
                "ignoring",
                "Refutation through Ignoring",
                "eye",
                "Deliberately leave an opposing point unanswered to diminish its weight.",
            ),
            entry(
                "questioning",
                "Refutation through Questioning",
                "question",
                "Challenge the opposing side with pointed questions.",
            ),
            entry(
                "reframing",
                "Refutation through Reframing",
                "frame",
                "Recast the terms of the dispute in one's own favour.",
            ),
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Block {
    pub id: BlockId,
    pub session_id: SessionId,
    pub turn_id: TurnId,
    pub debater_id: DebaterId,
    pub side: Side,
    pub text: String,
    pub content_length: usize,
    pub strategy_tags: Vec<StrategyTag>,
    pub clash_point_ids: Vec<ClashPointId>,
    pub disagreement_ids: Vec<DisagreementId>,
    pub sentence_spans: Vec<SentenceRange>,
}

impl Block {
    pub fn references_clash(&self, id: &ClashPointId) -> bool {
        self.clash_point_ids.contains(id)
    }

    pub fn references_disagreement(&self, id: &DisagreementId) -> bool {
        self.disagreement_ids.contains(id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Turn {
    pub id: TurnId,
    pub session_id: SessionId,
    pub debater_id: DebaterId,
    pub block_ids: Vec<BlockId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Session {
    pub id: SessionId,
    /// 1-based chronological index.
    pub index: u32,
    pub title: String,
    pub turn_ids: Vec<TurnId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClashPoint {
    pub id: ClashPointId,
    pub label: String,
    /// Slot in the categorical clash palette; slot 0 is the most referenced.
    pub color_key: usize,
    pub disagreement_ids: Vec<DisagreementId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Disagreement {
    pub id: DisagreementId,
    pub clash_point_id: ClashPointId,
    pub label: String,
    pub affirmative_viewpoint: String,
    pub negative_viewpoint: String,
    /// Blocks in chronological order.
    pub path: Vec<BlockId>,
}

impl Disagreement {
    pub fn viewpoint(&self, side: Side) -> &str {
        match side {
            Side::Affirmative => &self.affirmative_viewpoint,
            Side::Negative => &self.negative_viewpoint,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Competition {
    pub name: String,
    pub language: String,
    pub format: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MetricMode {
    WhitespaceTokens,
    Graphemes,
}

/// Unit in which block content length is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ContentMetric {
    pub mode: MetricMode,
}

impl ContentMetric {
    pub const WHITESPACE: ContentMetric = ContentMetric { mode: MetricMode::WhitespaceTokens };
    pub const GRAPHEMES: ContentMetric = ContentMetric { mode: MetricMode::Graphemes };

    /// CJK language tags count graphemes, everything else counts
    /// whitespace-separated tokens.
    pub fn for_language(tag: &str) -> Self {
        if crate::text::is_cjk_language(tag) {
            Self::GRAPHEMES
        } else {
            Self::WHITESPACE
        }
    }

    pub fn measure(&self, text: &str) -> usize {
        match self.mode {
            MetricMode::WhitespaceTokens => crate::text::whitespace_token_count(text),
            MetricMode::Graphemes => crate::text::visible_grapheme_count(text),
        }
    }
}

/// Plain-data contents of a corpus, before indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusParts {
    pub competition: Competition,
    pub content_metric: ContentMetric,
    pub debaters: Vec<Debater>,
    pub sessions: Vec<Session>,
    pub turns: Vec<Turn>,
    pub blocks: Vec<Block>,
    pub clash_points: Vec<ClashPoint>,
    pub disagreements: Vec<Disagreement>,
    pub strategy_catalog: StrategyCatalog,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct CorpusIndex {
    debaters: HashMap<DebaterId, usize>,
    sessions: HashMap<SessionId, usize>,
    turns: HashMap<TurnId, usize>,
    blocks: HashMap<BlockId, usize>,
    clash_points: HashMap<ClashPointId, usize>,
    disagreements: HashMap<DisagreementId, usize>,
}

fn index_of<K: std::hash::Hash + Eq + Clone>(keys: impl Iterator<Item = K>) -> HashMap<K, usize> {
    let mut map = HashMap::new();
    for (i, k) in keys.enumerate() {
        // first occurrence wins; duplicates are reported by validation
        map.entry(k).or_insert(i);
    }
    map
}

/// One competition's debate record with id lookup tables.
///
/// Construction normalizes order: sessions are sorted by index and blocks
/// are reordered to walk order (session, turn, block), so block positions
/// are chronological ranks. Blocks unreachable from any session keep their
/// relative order at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct DebateCorpus {
    parts: CorpusParts,
    index: CorpusIndex,
}

impl DebateCorpus {
    pub fn new(mut parts: CorpusParts) -> Self {
        parts.sessions.sort_by_key(|s| s.index);

        let turn_pos = index_of(parts.turns.iter().map(|t| t.id.clone()));
        let block_pos = index_of(parts.blocks.iter().map(|b| b.id.clone()));
        let mut order: Vec<usize> = Vec::with_capacity(parts.blocks.len());
        let mut placed = vec![false; parts.blocks.len()];
        for session in &parts.sessions {
            for tid in &session.turn_ids {
                let Some(&ti) = turn_pos.get(tid) else { continue };
                for bid in &parts.turns[ti].block_ids {
                    if let Some(&bi) = block_pos.get(bid) {
                        if !placed[bi] {
                            placed[bi] = true;
                            order.push(bi);
                        }
                    }
                }
            }
        }
        order.extend((0..parts.blocks.len()).filter(|&i| !placed[i]));
        let mut slots: Vec<Option<Block>> = parts.blocks.drain(..).map(Some).collect();
        parts.blocks = order.into_iter().filter_map(|i| slots[i].take()).collect();

        let index = CorpusIndex {
            debaters: index_of(parts.debaters.iter().map(|d| d.id.clone())),
            sessions: index_of(parts.sessions.iter().map(|s| s.id.clone())),
            turns: index_of(parts.turns.iter().map(|t| t.id.clone())),
            blocks: index_of(parts.blocks.iter().map(|b| b.id.clone())),
            clash_points: index_of(parts.clash_points.iter().map(|c| c.id.clone())),
            disagreements: index_of(parts.disagreements.iter().map(|d| d.id.clone())),
        };
        Self { parts, index }
    }

    pub fn parts(&self) -> &CorpusParts {
        &self.parts
    }

    pub fn into_parts(self) -> CorpusParts {
        self.parts
    }

    pub fn competition(&self) -> &Competition {
        &self.parts.competition
    }

    pub fn content_metric(&self) -> ContentMetric {
        self.parts.content_metric
    }

    pub fn debaters(&self) -> &[Debater] {
        &self.parts.debaters
    }

    /// Sessions in chronological order.
    pub fn sessions(&self) -> &[Session] {
        &self.parts.sessions
    }

    pub fn turns(&self) -> &[Turn] {
        &self.parts.turns
    }

    /// Blocks in chronological order.
    pub fn blocks(&self) -> &[Block] {
        &self.parts.blocks
    }

    pub fn clash_points(&self) -> &[ClashPoint] {
        &self.parts.clash_points
    }

    pub fn disagreements(&self) -> &[Disagreement] {
        &self.parts.disagreements
    }

    pub fn strategy_catalog(&self) -> &StrategyCatalog {
        &self.parts.strategy_catalog
    }

    pub fn debater(&self, id: &DebaterId) -> Option<&Debater> {
        self.index.debaters.get(id).map(|&i| &self.parts.debaters[i])
    }

    pub fn session(&self, id: &SessionId) -> Option<&Session> {
        self.index.sessions.get(id).map(|&i| &self.parts.sessions[i])
    }

    /// Position of the session in chronological order.
    pub fn session_position(&self, id: &SessionId) -> Option<usize> {
        self.index.sessions.get(id).copied()
    }

    pub fn turn(&self, id: &TurnId) -> Option<&Turn> {
        self.index.turns.get(id).map(|&i| &self.parts.turns[i])
    }

    pub fn block(&self, id: &BlockId) -> Option<&Block> {
        self.index.blocks.get(id).map(|&i| &self.parts.blocks[i])
    }

    /// Chronological rank of a block.
    pub fn block_rank(&self, id: &BlockId) -> Option<usize> {
        self.index.blocks.get(id).copied()
    }

    pub fn clash_point(&self, id: &ClashPointId) -> Option<&ClashPoint> {
        self.index.clash_points.get(id).map(|&i| &self.parts.clash_points[i])
    }

    pub fn disagreement(&self, id: &DisagreementId) -> Option<&Disagreement> {
        self.index.disagreements.get(id).map(|&i| &self.parts.disagreements[i])
    }

    /// Blocks of one session in chronological order.
    pub fn session_blocks<'a>(&'a self, id: &'a SessionId) -> impl Iterator<Item = &'a Block> + 'a {
        self.parts.blocks.iter().filter(move |b| &b.session_id == id)
    }

    pub fn session_content_length(&self, id: &SessionId) -> usize {
        self.session_blocks(id).map(|b| b.content_length).sum()
    }

    pub fn total_content_length(&self) -> usize {
        self.parts.blocks.iter().map(|b| b.content_length).sum()
    }
}
