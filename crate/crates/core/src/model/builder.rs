use std::collections::HashMap;
use std::num::NonZeroU32;

use super::*;

/// Assigns clash palette slots in descending order of how many blocks
/// reference each clash point; ties keep declaration order.
pub fn assign_color_keys(parts: &mut CorpusParts) {
    let mut counts: HashMap<&ClashPointId, usize> = HashMap::new();
    for b in &parts.blocks {
        for c in &b.clash_point_ids {
            *counts.entry(c).or_default() += 1;
        }
    }
    let mut order: Vec<usize> = (0..parts.clash_points.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(counts.get(&parts.clash_points[i].id).copied().unwrap_or(0)));
    let slots: Vec<(usize, usize)> = order.into_iter().enumerate().map(|(slot, i)| (i, slot)).collect();
    for (i, slot) in slots {
        parts.clash_points[i].color_key = slot;
    }
}

/// Segments a block's sentences at every boundary where a strategy tag
/// starts or ends.
pub fn default_sentence_spans(sentences: usize, tags: &[StrategyTag]) -> Vec<SentenceRange> {
    if sentences == 0 {
        return Vec::new();
    }
    let mut cuts = vec![0, sentences];
    for t in tags {
        cuts.push(t.sentence_range.start.min(sentences));
        cuts.push(t.sentence_range.end.min(sentences));
    }
    cuts.sort_unstable();
    cuts.dedup();
    cuts.windows(2).map(|w| SentenceRange::new(w[0], w[1])).collect()
}

/// Incremental construction of a consistent corpus.
///
/// Turns attach to the most recent session and blocks to the most recent
/// turn. Disagreement references on blocks are derived from paths, so the
/// path/reference invariants hold by construction.
#[derive(Debug, Clone)]
pub struct CorpusBuilder {
    parts: CorpusParts,
    extra_clash_refs: Vec<(BlockId, ClashPointId)>,
}

impl CorpusBuilder {
    pub fn new(name: &str, language: &str) -> Self {
        Self {
            parts: CorpusParts {
                competition: Competition {
                    name: name.to_string(),
                    language: language.to_string(),
                    format: "synthetic".to_string(),
                },
                content_metric: ContentMetric::for_language(language),
                debaters: Vec::new(),
                sessions: Vec::new(),
                turns: Vec::new(),
                blocks: Vec::new(),
                clash_points: Vec::new(),
                disagreements: Vec::new(),
                strategy_catalog: StrategyCatalog::default_refutation(),
            },
            extra_clash_refs: Vec::new(),
        }
    }

    pub fn format(mut self, format: &str) -> Self {
        self.parts.competition.format = format.to_string();
        self
    }

    pub fn catalog(mut self, catalog: StrategyCatalog) -> Self {
        self.parts.strategy_catalog = catalog;
        self
    }

    /// Adds a debater; ordinals count up per side.
    pub fn debater(&mut self, id: &str, side: Side, name: &str) -> &mut Self {
        let ordinal = self.parts.debaters.iter().filter(|d| d.side == side).count() as u32 + 1;
        self.parts.debaters.push(Debater {
            id: id.into(),
            side,
            ordinal: NonZeroU32::new(ordinal).expect("ordinal starts at 1"),
            display_name: name.to_string(),
        });
        self
    }

    pub fn session(&mut self, id: &str, title: &str) -> &mut Self {
        let index = self.parts.sessions.len() as u32 + 1;
        self.parts.sessions.push(Session { id: id.into(), index, title: title.to_string(), turn_ids: Vec::new() });
        self
    }

    /// # Panics
    /// If no session was added yet.
    pub fn turn(&mut self, id: &str, debater: &str) -> &mut Self {
        let session = self.parts.sessions.last_mut().expect("turn needs a session");
        session.turn_ids.push(id.into());
        self.parts.turns.push(Turn {
            id: id.into(),
            session_id: session.id.clone(),
            debater_id: debater.into(),
            block_ids: Vec::new(),
        });
        self
    }

    /// # Panics
    /// If no turn was added yet.
    pub fn block(&mut self, id: &str, text: &str) -> &mut Self {
        let turn = self.parts.turns.last_mut().expect("block needs a turn");
        turn.block_ids.push(id.into());
        let side =
            self.parts.debaters.iter().find(|d| d.id == turn.debater_id).map(|d| d.side).unwrap_or(Side::Affirmative);
        self.parts.blocks.push(Block {
            id: id.into(),
            session_id: turn.session_id.clone(),
            turn_id: turn.id.clone(),
            debater_id: turn.debater_id.clone(),
            side,
            text: text.to_string(),
            content_length: 0,
            strategy_tags: Vec::new(),
            clash_point_ids: Vec::new(),
            disagreement_ids: Vec::new(),
            sentence_spans: Vec::new(),
        });
        self
    }

    /// Tags sentences `[start, end)` of the most recent block.
    pub fn tag(&mut self, strategy: &str, start: usize, end: usize) -> &mut Self {
        let block = self.parts.blocks.last_mut().expect("tag needs a block");
        block
            .strategy_tags
            .push(StrategyTag { strategy_id: strategy.into(), sentence_range: SentenceRange::new(start, end) });
        self
    }

    pub fn clash_point(&mut self, id: &str, label: &str) -> &mut Self {
        self.parts.clash_points.push(ClashPoint {
            id: id.into(),
            label: label.to_string(),
            color_key: 0,
            disagreement_ids: Vec::new(),
        });
        self
    }

    pub fn disagreement(
        &mut self,
        id: &str,
        clash_point: &str,
        label: &str,
        viewpoints: (&str, &str),
        path: &[&str],
    ) -> &mut Self {
        if let Some(cp) = self.parts.clash_points.iter_mut().find(|c| c.id == clash_point) {
            cp.disagreement_ids.push(id.into());
        }
        self.parts.disagreements.push(Disagreement {
            id: id.into(),
            clash_point_id: clash_point.into(),
            label: label.to_string(),
            affirmative_viewpoint: viewpoints.0.to_string(),
            negative_viewpoint: viewpoints.1.to_string(),
            path: path.iter().map(|&b| BlockId::from(b)).collect(),
        });
        self
    }

    /// A clash reference not tied to any disagreement path (ring only).
    pub fn clash_reference(&mut self, block: &str, clash_point: &str) -> &mut Self {
        self.extra_clash_refs.push((block.into(), clash_point.into()));
        self
    }

    pub fn build(self) -> DebateCorpus {
        let CorpusBuilder { mut parts, extra_clash_refs } = self;
        let metric = parts.content_metric;
        let by_id: HashMap<BlockId, usize> = parts.blocks.iter().enumerate().map(|(i, b)| (b.id.clone(), i)).collect();

        for d in &parts.disagreements {
            for bid in &d.path {
                if let Some(&i) = by_id.get(bid) {
                    let b = &mut parts.blocks[i];
                    if !b.disagreement_ids.contains(&d.id) {
                        b.disagreement_ids.push(d.id.clone());
                    }
                    if !b.clash_point_ids.contains(&d.clash_point_id) {
                        b.clash_point_ids.push(d.clash_point_id.clone());
                    }
                }
            }
        }
        for (bid, cid) in extra_clash_refs {
            if let Some(&i) = by_id.get(&bid) {
                let b = &mut parts.blocks[i];
                if !b.clash_point_ids.contains(&cid) {
                    b.clash_point_ids.push(cid);
                }
            }
        }
        for b in &mut parts.blocks {
            b.content_length = metric.measure(&b.text);
            let n = crate::text::sentence_count(&b.text);
            b.sentence_spans = default_sentence_spans(n, &b.strategy_tags);
        }
        assign_color_keys(&mut parts);
        DebateCorpus::new(parts)
    }
}
