use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::{DebateCorpus, SessionId, Side};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideLengths {
    pub affirmative: usize,
    pub negative: usize,
}

impl SideLengths {
    pub fn get(&self, side: Side) -> usize {
        match side {
            Side::Affirmative => self.affirmative,
            Side::Negative => self.negative,
        }
    }

    fn add(&mut self, side: Side, n: usize) {
        match side {
            Side::Affirmative => self.affirmative += n,
            Side::Negative => self.negative += n,
        }
    }

    pub fn total(&self) -> usize {
        self.affirmative + self.negative
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionLength {
    pub session_id: SessionId,
    pub index: u32,
    pub turn_count: usize,
    pub block_count: usize,
    pub content_length: usize,
    pub per_side: SideLengths,
}

/// Dataset-overview counts for one competition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusStats {
    pub debater_count: usize,
    pub session_count: usize,
    pub turn_count: usize,
    pub block_count: usize,
    pub total_content_length: usize,
    pub per_side: SideLengths,
    /// Ordered by session index.
    pub per_session: Vec<SessionLength>,
}

pub fn compute_stats(corpus: &DebateCorpus) -> CorpusStats {
    let mut per_session: Vec<SessionLength> = corpus
        .sessions()
        .iter()
        .map(|s| SessionLength {
            session_id: s.id.clone(),
            index: s.index,
            turn_count: s.turn_ids.len(),
            block_count: 0,
            content_length: 0,
            per_side: SideLengths::default(),
        })
        .collect();
    let mut per_side = SideLengths::default();
    for b in corpus.blocks() {
        per_side.add(b.side, b.content_length);
        if let Some(pos) = corpus.session_position(&b.session_id) {
            let entry = &mut per_session[pos];
            entry.block_count += 1;
            entry.content_length += b.content_length;
            entry.per_side.add(b.side, b.content_length);
        }
    }
    CorpusStats {
        debater_count: corpus.debaters().len(),
        session_count: corpus.sessions().len(),
        turn_count: corpus.turns().len(),
        block_count: corpus.blocks().len(),
        total_content_length: corpus.total_content_length(),
        per_side,
        per_session,
    }
}

impl CorpusStats {
    /// Combines statistics of two corpora with disjoint sessions and
    /// debaters.
    pub fn merge(&self, other: &CorpusStats) -> CorpusStats {
        let mut per_session: Vec<SessionLength> = self.per_session.iter().chain(&other.per_session).cloned().collect();
        per_session.sort_by_key(|s| s.index);
        CorpusStats {
            debater_count: self.debater_count + other.debater_count,
            session_count: self.session_count + other.session_count,
            turn_count: self.turn_count + other.turn_count,
            block_count: self.block_count + other.block_count,
            total_content_length: self.total_content_length + other.total_content_length,
            per_side: SideLengths {
                affirmative: self.per_side.affirmative + other.per_side.affirmative,
                negative: self.per_side.negative + other.per_side.negative,
            },
            per_session,
        }
    }

    /// Plain-text table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "debaters  {:>8}", self.debater_count);
        let _ = writeln!(out, "sessions  {:>8}", self.session_count);
        let _ = writeln!(out, "turns     {:>8}", self.turn_count);
        let _ = writeln!(out, "blocks    {:>8}", self.block_count);
        let _ = writeln!(
            out,
            "content   {:>8}  (affirmative {}, negative {})",
            self.total_content_length, self.per_side.affirmative, self.per_side.negative
        );
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:>5}  {:<12} {:>6} {:>6} {:>8} {:>8} {:>8}",
            "index", "session", "turns", "blocks", "length", "aff", "neg"
        );
        for s in &self.per_session {
            let _ = writeln!(
                out,
                "{:>5}  {:<12} {:>6} {:>6} {:>8} {:>8} {:>8}",
                s.index,
                s.session_id.as_str(),
                s.turn_count,
                s.block_count,
                s.content_length,
                s.per_side.affirmative,
                s.per_side.negative
            );
        }
        out
    }
}
