//! Content-view cards: one per block, with the text pre-split at strategy
//! boundaries so renderers do no text processing.

use serde::{Deserialize, Serialize};

use crate::model::{
    BlockId, ClashPointId, DebateCorpus, DebaterId, DisagreementId, SentenceRange, SessionId, Side, StrategyId, TurnId,
};
use crate::text::sentences;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CardClashPoint {
    pub id: ClashPointId,
    pub label: String,
    pub color_key: usize,
}

/// The card side's stance on one disagreement the block takes part in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CardViewpoint {
    pub disagreement_id: DisagreementId,
    pub clash_point_id: ClashPointId,
    pub label: String,
    pub viewpoint: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CardStrategy {
    pub id: StrategyId,
    pub name: String,
    pub icon_key: String,
}

/// A run of sentences and the strategies tagged on any of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TextSegment {
    pub sentence_range: SentenceRange,
    pub text: String,
    pub strategies: Vec<CardStrategy>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ContentCard {
    pub block_id: BlockId,
    pub session_id: SessionId,
    pub turn_id: TurnId,
    pub debater_id: DebaterId,
    pub side: Side,
    /// Debater identifier for the upper-right corner, e.g. `DEBATER A1`.
    pub debater_label: String,
    pub content_length: usize,
    pub clash_points: Vec<CardClashPoint>,
    pub viewpoints: Vec<CardViewpoint>,
    pub segments: Vec<TextSegment>,
}

pub fn content_card(corpus: &DebateCorpus, id: &BlockId) -> Option<ContentCard> {
    let b = corpus.block(id)?;
    let catalog = corpus.strategy_catalog();
    let debater_label = corpus.debater(&b.debater_id).map(|d| d.display_identifier()).unwrap_or_default();
    let clash_points = b
        .clash_point_ids
        .iter()
        .filter_map(|c| corpus.clash_point(c))
        .map(|c| CardClashPoint { id: c.id.clone(), label: c.label.clone(), color_key: c.color_key })
        .collect();
    let viewpoints = b
        .disagreement_ids
        .iter()
        .filter_map(|d| corpus.disagreement(d))
        .map(|d| CardViewpoint {
            disagreement_id: d.id.clone(),
            clash_point_id: d.clash_point_id.clone(),
            label: d.label.clone(),
            viewpoint: d.viewpoint(b.side).to_string(),
        })
        .collect();
    let sents = sentences(&b.text);
    let segments = b
        .sentence_spans
        .iter()
        .map(|span| {
            let end = span.end.min(sents.len());
            let start = span.start.min(end);
            let text = sents[start..end].concat().trim().to_string();
            let mut ids: Vec<&StrategyId> =
                b.strategy_tags.iter().filter(|t| t.sentence_range.overlaps(span)).map(|t| &t.strategy_id).collect();
            ids.sort_by_key(|s| (catalog.position(s).unwrap_or(usize::MAX), (*s).clone()));
            ids.dedup();
            let strategies = ids
                .into_iter()
                .map(|id| {
                    let e = catalog.get(id);
                    CardStrategy {
                        id: id.clone(),
                        name: e.map_or_else(|| id.to_string(), |e| e.name.clone()),
                        icon_key: e.map(|e| e.icon_key.clone()).unwrap_or_default(),
                    }
                })
                .collect();
            TextSegment { sentence_range: *span, text, strategies }
        })
        .collect();
    Some(ContentCard {
        block_id: b.id.clone(),
        session_id: b.session_id.clone(),
        turn_id: b.turn_id.clone(),
        debater_id: b.debater_id.clone(),
        side: b.side,
        debater_label,
        content_length: b.content_length,
        clash_points,
        viewpoints,
        segments,
    })
}

/// Cards for every block, chronologically.
pub fn content_cards(corpus: &DebateCorpus) -> Vec<ContentCard> {
    corpus.blocks().iter().filter_map(|b| content_card(corpus, &b.id)).collect()
}

/// A block's card with up to `context` chronological neighbours on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockContext {
    pub block: ContentCard,
    pub before: Vec<ContentCard>,
    pub after: Vec<ContentCard>,
}

pub fn block_context(corpus: &DebateCorpus, id: &BlockId, context: usize) -> Option<BlockContext> {
    let rank = corpus.block_rank(id)?;
    let blocks = corpus.blocks();
    let card = |i: usize| content_card(corpus, &blocks[i].id);
    Some(BlockContext {
        block: card(rank)?,
        before: (rank.saturating_sub(context)..rank).filter_map(card).collect(),
        after: (rank + 1..blocks.len().min(rank.saturating_add(context).saturating_add(1))).filter_map(card).collect(),
    })
}
