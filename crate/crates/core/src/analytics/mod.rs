//! Derived quantities consumed by the layouts: chord interactions, clash
//! shares, side proportions, strategy usage, peaks and co-occurrence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{BlockId, ClashPointId, DebateCorpus, DisagreementId, SessionId, Side, StrategyId};

/// A chord: two consecutive blocks on a disagreement path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Interaction {
    pub disagreement_id: DisagreementId,
    pub clash_point_id: ClashPointId,
    pub from_block_id: BlockId,
    pub to_block_id: BlockId,
    pub same_side: bool,
}

/// One interaction per consecutive pair on every disagreement path, in
/// disagreement order; singleton paths contribute nothing.
pub fn interactions_from_paths(corpus: &DebateCorpus) -> Vec<Interaction> {
    let mut out = Vec::new();
    for d in corpus.disagreements() {
        for pair in d.path.windows(2) {
            let (Some(a), Some(b)) = (corpus.block(&pair[0]), corpus.block(&pair[1])) else {
                continue;
            };
            out.push(Interaction {
                disagreement_id: d.id.clone(),
                clash_point_id: d.clash_point_id.clone(),
                from_block_id: a.id.clone(),
                to_block_id: b.id.clone(),
                same_side: a.side == b.side,
            });
        }
    }
    out
}

/// Share of interactions whose endpoints lie on different sides; these
/// are the chords drawn in two colors. `None` without interactions.
pub fn cross_side_fraction(interactions: &[Interaction]) -> Option<f64> {
    if interactions.is_empty() {
        return None;
    }
    let cross = interactions.iter().filter(|i| !i.same_side).count();
    Some(cross as f64 / interactions.len() as f64)
}

/// Basis for clash-point shares within a session.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ShareWeighting {
    /// Each referencing block counts once.
    #[default]
    BlockCount,
    /// Each referencing block counts with its content length.
    ContentLength,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClashShare {
    pub clash_point_id: ClashPointId,
    pub weight: usize,
    pub share: f64,
}

/// Block-count weighted clash shares of a session, descending by share then id.
pub fn clash_point_shares(corpus: &DebateCorpus, session: &SessionId) -> Vec<ClashShare> {
    clash_point_shares_weighted(corpus, session, ShareWeighting::BlockCount)
}

pub fn clash_point_shares_weighted(
    corpus: &DebateCorpus,
    session: &SessionId,
    weighting: ShareWeighting,
) -> Vec<ClashShare> {
    let mut weights: BTreeMap<&ClashPointId, usize> = BTreeMap::new();
    for b in corpus.session_blocks(session) {
        let w = match weighting {
            ShareWeighting::BlockCount => 1,
            ShareWeighting::ContentLength => b.content_length,
        };
        for c in &b.clash_point_ids {
            *weights.entry(c).or_default() += w;
        }
    }
    let total: usize = weights.values().sum();
    if total == 0 {
        return Vec::new();
    }
    let mut shares: Vec<ClashShare> = weights
        .into_iter()
        .filter(|(_, w)| *w > 0)
        .map(|(id, w)| ClashShare { clash_point_id: id.clone(), weight: w, share: w as f64 / total as f64 })
        .collect();
    shares.sort_by(|a, b| b.weight.cmp(&a.weight).then_with(|| a.clash_point_id.cmp(&b.clash_point_id)));
    shares
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DisagreementCount {
    pub disagreement_id: DisagreementId,
    pub clash_point_id: ClashPointId,
    pub count: usize,
}

/// Blocks of the session referencing each disagreement, descending by count
/// then id; disagreements absent from the session are omitted.
pub fn disagreement_block_counts(corpus: &DebateCorpus, session: &SessionId) -> Vec<DisagreementCount> {
    let mut counts: BTreeMap<&DisagreementId, usize> = BTreeMap::new();
    for b in corpus.session_blocks(session) {
        for d in &b.disagreement_ids {
            *counts.entry(d).or_default() += 1;
        }
    }
    let mut out: Vec<DisagreementCount> = counts
        .into_iter()
        .filter_map(|(id, count)| {
            let d = corpus.disagreement(id)?;
            Some(DisagreementCount { disagreement_id: id.clone(), clash_point_id: d.clash_point_id.clone(), count })
        })
        .collect();
    out.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.disagreement_id.cmp(&b.disagreement_id)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideShares {
    pub affirmative: f64,
    pub negative: f64,
}

impl SideShares {
    pub fn get(&self, side: Side) -> f64 {
        match side {
            Side::Affirmative => self.affirmative,
            Side::Negative => self.negative,
        }
    }
}

/// Each side's share of the session's content length; `None` when the
/// session has no content.
pub fn side_proportions(corpus: &DebateCorpus, session: &SessionId) -> Option<SideShares> {
    let mut lens = [0usize; 2];
    for b in corpus.session_blocks(session) {
        lens[b.side.index()] += b.content_length;
    }
    let total = lens[0] + lens[1];
    if total == 0 {
        return None;
    }
    let affirmative = lens[0] as f64 / total as f64;
    Some(SideShares { affirmative, negative: 1.0 - affirmative })
}

/// Strategy instance counts per session, strategy and side. Strategies are
/// in catalog order, sessions in chronological order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StrategyUsage {
    pub strategies: Vec<StrategyId>,
    pub sessions: Vec<SessionId>,
    /// `counts[session][strategy] = [affirmative, negative]`
    pub counts: Vec<Vec<[usize; 2]>>,
}

impl StrategyUsage {
    pub fn strategy_position(&self, id: &StrategyId) -> Option<usize> {
        self.strategies.iter().position(|s| s == id)
    }

    pub fn session_position(&self, id: &SessionId) -> Option<usize> {
        self.sessions.iter().position(|s| s == id)
    }

    pub fn count(&self, session: usize, strategy: usize, side: Side) -> usize {
        self.counts[session][strategy][side.index()]
    }

    /// Both sides combined.
    pub fn session_total(&self, session: usize, strategy: usize) -> usize {
        let [a, n] = self.counts[session][strategy];
        a + n
    }

    pub fn strategy_total(&self, strategy: usize) -> usize {
        (0..self.sessions.len()).map(|s| self.session_total(s, strategy)).sum()
    }
}

pub fn strategy_usage(corpus: &DebateCorpus) -> StrategyUsage {
    let catalog = corpus.strategy_catalog();
    let strategies: Vec<StrategyId> = catalog.entries.iter().map(|e| e.id.clone()).collect();
    let sessions: Vec<SessionId> = corpus.sessions().iter().map(|s| s.id.clone()).collect();
    let mut counts = vec![vec![[0usize; 2]; strategies.len()]; sessions.len()];
    for b in corpus.blocks() {
        let Some(si) = corpus.session_position(&b.session_id) else { continue };
        for tag in &b.strategy_tags {
            if let Some(k) = catalog.position(&tag.strategy_id) {
                counts[si][k][b.side.index()] += 1;
            }
        }
    }
    StrategyUsage { strategies, sessions, counts }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Peak {
    pub strategy_id: StrategyId,
    /// Position in the strategy catalog.
    pub catalog_position: usize,
    pub peak: usize,
}

/// Maximum per-session count (both sides) of every strategy that is used at
/// all, in catalog order.
pub fn peak_usage(usage: &StrategyUsage) -> Vec<Peak> {
    (0..usage.strategies.len())
        .filter_map(|k| {
            let peak = (0..usage.sessions.len()).map(|s| usage.session_total(s, k)).max().unwrap_or(0);
            (peak > 0).then(|| Peak { strategy_id: usage.strategies[k].clone(), catalog_position: k, peak })
        })
        .collect()
}

/// A block that uses two or more distinct strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CooccurrenceRecord {
    pub session_id: SessionId,
    pub side: Side,
    /// Distinct strategies in catalog order.
    pub strategy_ids: Vec<StrategyId>,
    pub block_id: BlockId,
}

/// Records sharing (session, side, strategy set), in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CooccurrenceGroup {
    pub session_id: SessionId,
    pub side: Side,
    pub strategy_ids: Vec<StrategyId>,
    /// Chronological.
    pub block_ids: Vec<BlockId>,
}

impl CooccurrenceGroup {
    pub fn multiplicity(&self) -> usize {
        self.block_ids.len()
    }
}

/// One record per qualifying block, chronologically.
pub fn cooccurrence_records(corpus: &DebateCorpus) -> Vec<CooccurrenceRecord> {
    let catalog = corpus.strategy_catalog();
    corpus
        .blocks()
        .iter()
        .filter_map(|b| {
            let mut positions: Vec<usize> =
                b.strategy_tags.iter().filter_map(|t| catalog.position(&t.strategy_id)).collect();
            positions.sort_unstable();
            positions.dedup();
            (positions.len() >= 2).then(|| CooccurrenceRecord {
                session_id: b.session_id.clone(),
                side: b.side,
                strategy_ids: positions.iter().map(|&p| catalog.entries[p].id.clone()).collect(),
                block_id: b.id.clone(),
            })
        })
        .collect()
}

pub fn cooccurrence(corpus: &DebateCorpus) -> Vec<CooccurrenceGroup> {
    group_cooccurrence(&cooccurrence_records(corpus))
}

pub fn group_cooccurrence(records: &[CooccurrenceRecord]) -> Vec<CooccurrenceGroup> {
    let mut groups: Vec<CooccurrenceGroup> = Vec::new();
    for r in records {
        match groups
            .iter_mut()
            .find(|g| g.session_id == r.session_id && g.side == r.side && g.strategy_ids == r.strategy_ids)
        {
            Some(g) => g.block_ids.push(r.block_id.clone()),
            None => groups.push(CooccurrenceGroup {
                session_id: r.session_id.clone(),
                side: r.side,
                strategy_ids: r.strategy_ids.clone(),
                block_ids: vec![r.block_id.clone()],
            }),
        }
    }
    groups
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionAnalytics {
    pub session_id: SessionId,
    pub clash_shares: Vec<ClashShare>,
    pub disagreement_counts: Vec<DisagreementCount>,
    pub side_proportions: Option<SideShares>,
}

/// Every derived table at once, for `conch stats --analytics`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalyticsReport {
    pub interactions: Vec<Interaction>,
    pub sessions: Vec<SessionAnalytics>,
    pub strategy_usage: StrategyUsage,
    pub peaks: Vec<Peak>,
    pub cooccurrence: Vec<CooccurrenceGroup>,
}

pub fn analyze(corpus: &DebateCorpus) -> AnalyticsReport {
    let usage = strategy_usage(corpus);
    AnalyticsReport {
        interactions: interactions_from_paths(corpus),
        sessions: corpus
            .sessions()
            .iter()
            .map(|s| SessionAnalytics {
                session_id: s.id.clone(),
                clash_shares: clash_point_shares(corpus, &s.id),
                disagreement_counts: disagreement_block_counts(corpus, &s.id),
                side_proportions: side_proportions(corpus, &s.id),
            })
            .collect(),
        peaks: peak_usage(&usage),
        strategy_usage: usage,
        cooccurrence: cooccurrence(corpus),
    }
}

#[cfg(test)]
mod tests;
