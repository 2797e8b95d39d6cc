use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{partition, LayoutConfig};
use crate::analytics::Interaction;
use crate::model::{BlockId, ClashPointId, DebateCorpus, DisagreementId, SessionId, Side};

/// A session's arc on the chord circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChordArc {
    pub session_id: SessionId,
    pub start_angle: f64,
    pub end_angle: f64,
}

/// Session arcs proportional to session content, clockwise from the top,
/// each followed by a fixed gap. Half a gap precedes the first arc so the
/// gaps sit symmetric around the top.
pub fn layout_chord_circle(corpus: &DebateCorpus, config: &LayoutConfig) -> Vec<ChordArc> {
    let n = corpus.sessions().len();
    let gap = config.chord_gap;
    let usable = 2.0 * PI - gap * n as f64;
    let weights: Vec<f64> = corpus.sessions().iter().map(|s| corpus.session_content_length(&s.id) as f64).collect();
    partition(0.0, usable, &weights)
        .into_iter()
        .enumerate()
        .zip(corpus.sessions())
        .map(|((i, (s, e)), session)| {
            let shift = gap * (i as f64 + 0.5);
            ChordArc { session_id: session.id.clone(), start_angle: s + shift, end_angle: e + shift }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ChordColorMode {
    /// Cross-side chords show both side colors, one per half.
    #[default]
    BicolorBySide,
    /// One run in the color of the earlier block's side.
    MonoBySide,
    /// One run in the clash point's color.
    ClashColor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Paint {
    Side { side: Side },
    Clash { clash_point_id: ClashPointId, color_key: usize },
}

/// A colored stretch of a chord, in curve parameter `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChordRun {
    pub t_start: f64,
    pub t_end: f64,
    pub paint: Paint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChordShape {
    pub disagreement_id: DisagreementId,
    pub clash_point_id: ClashPointId,
    pub from_block_id: BlockId,
    pub to_block_id: BlockId,
    pub same_side: bool,
    pub from_session_id: SessionId,
    pub to_session_id: SessionId,
    pub from_angle: f64,
    pub to_angle: f64,
    pub runs: Vec<ChordRun>,
}

impl ChordShape {
    pub fn is_bicolor(&self) -> bool {
        self.runs.len() > 1
    }
}

/// Angle of each block's midpoint on its session arc.
fn block_anchors(corpus: &DebateCorpus, arcs: &[ChordArc]) -> HashMap<BlockId, (SessionId, f64)> {
    let mut out = HashMap::new();
    for arc in arcs {
        let blocks: Vec<_> = corpus.session_blocks(&arc.session_id).collect();
        let weights: Vec<f64> = blocks.iter().map(|b| b.content_length as f64).collect();
        let pieces = partition(arc.start_angle, arc.end_angle - arc.start_angle, &weights);
        for (b, (s, e)) in blocks.iter().zip(pieces) {
            out.insert(b.id.clone(), (arc.session_id.clone(), 0.5 * (s + e)));
        }
    }
    out
}

/// One chord per interaction. A clash filter keeps only that clash
/// point's interactions and paints them in its color whatever `mode` says.
pub fn layout_chords(
    corpus: &DebateCorpus,
    interactions: &[Interaction],
    arcs: &[ChordArc],
    mode: ChordColorMode,
    clash_filter: Option<&ClashPointId>,
) -> Vec<ChordShape> {
    let anchors = block_anchors(corpus, arcs);
    let mode = if clash_filter.is_some() { ChordColorMode::ClashColor } else { mode };
    interactions
        .iter()
        .filter(|x| clash_filter.is_none_or(|cp| &x.clash_point_id == cp))
        .filter_map(|x| {
            let (from_session, from_angle) = anchors.get(&x.from_block_id)?.clone();
            let (to_session, to_angle) = anchors.get(&x.to_block_id)?.clone();
            let from_side = corpus.block(&x.from_block_id)?.side;
            let to_side = corpus.block(&x.to_block_id)?.side;
            let side_run = |side: Side, t_start, t_end| ChordRun { t_start, t_end, paint: Paint::Side { side } };
            let runs = match mode {
                ChordColorMode::BicolorBySide if from_side != to_side => {
                    vec![side_run(from_side, 0.0, 0.5), side_run(to_side, 0.5, 1.0)]
                }
                ChordColorMode::BicolorBySide | ChordColorMode::MonoBySide => vec![side_run(from_side, 0.0, 1.0)],
                ChordColorMode::ClashColor => {
                    let color_key = corpus.clash_point(&x.clash_point_id).map_or(0, |c| c.color_key);
                    vec![ChordRun {
                        t_start: 0.0,
                        t_end: 1.0,
                        paint: Paint::Clash { clash_point_id: x.clash_point_id.clone(), color_key },
                    }]
                }
            };
            Some(ChordShape {
                disagreement_id: x.disagreement_id.clone(),
                clash_point_id: x.clash_point_id.clone(),
                from_block_id: x.from_block_id.clone(),
                to_block_id: x.to_block_id.clone(),
                same_side: x.same_side,
                from_session_id: from_session,
                to_session_id: to_session,
                from_angle,
                to_angle,
                runs,
            })
        })
        .collect()
}
