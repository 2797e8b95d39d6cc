use serde::{Deserialize, Serialize};

use super::label::{fit_label, BoxSize, LabelFit};
use super::process::SpiralSegment;
use super::{partition, LayoutConfig};
use crate::analytics::{clash_point_shares_weighted, disagreement_block_counts};
use crate::model::{ClashPointId, DebateCorpus, DisagreementId, SessionId, StrategyId};

/// Share of a sector's height used by the disagreement label; the rest
/// holds the viewpoints.
const LABEL_HEIGHT_SHARE: f64 = 0.6;
/// Viewpoint fonts are capped at this fraction of the maximum font.
const VIEWPOINT_FONT_SHARE: f64 = 0.75;

/// A clash point's section of a session's inner band. Radial offsets are
/// measured outward from the spiral radius at each angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RingSection {
    pub session_id: SessionId,
    pub clash_point_id: ClashPointId,
    pub color_key: usize,
    pub share: f64,
    pub start_angle: f64,
    pub end_angle: f64,
    pub inner_offset: f64,
    pub outer_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SectorBlock {
    pub session_id: SessionId,
    pub disagreement_id: DisagreementId,
    pub clash_point_id: ClashPointId,
    pub color_key: usize,
    pub block_count: usize,
    pub start_angle: f64,
    pub end_angle: f64,
    pub inner_offset: f64,
    pub outer_offset: f64,
    pub label: LabelFit,
    pub viewpoints: LabelFit,
    /// Distinct strategies used by the session's blocks on this
    /// disagreement, in catalog order.
    pub strategy_ids: Vec<StrategyId>,
}

/// Label box of a sector: the arc length at mid-band by the band height.
fn sector_box(seg: &SpiralSegment, start: f64, end: f64, inner: f64, outer: f64) -> BoxSize {
    let mid = 0.5 * (start + end);
    let r = seg.radius_at(mid) + 0.5 * (inner + outer);
    BoxSize { width: (end - start) * r, height: outer - inner }
}

pub fn layout_ring_and_sectors(
    corpus: &DebateCorpus,
    segments: &[SpiralSegment],
    config: &LayoutConfig,
) -> (Vec<RingSection>, Vec<SectorBlock>) {
    let mut ring = Vec::new();
    let mut sectors = Vec::new();
    let catalog = corpus.strategy_catalog();
    for seg in segments {
        let width = seg.band_width.max(0.0);
        let split = config.ring_fraction * width;
        let phi = seg.central_angle;

        let shares = clash_point_shares_weighted(corpus, &seg.session_id, config.share_weighting);
        let weights: Vec<f64> = shares.iter().map(|s| s.share).collect();
        for (s, (start, end)) in shares.iter().zip(partition(0.0, phi, &weights)) {
            ring.push(RingSection {
                session_id: seg.session_id.clone(),
                clash_point_id: s.clash_point_id.clone(),
                color_key: corpus.clash_point(&s.clash_point_id).map_or(0, |c| c.color_key),
                share: s.share,
                start_angle: start,
                end_angle: end,
                inner_offset: 0.0,
                outer_offset: split,
            });
        }

        let counts = disagreement_block_counts(corpus, &seg.session_id);
        let weights: Vec<f64> = counts.iter().map(|c| c.count as f64).collect();
        for (c, (start, end)) in counts.iter().zip(partition(0.0, phi, &weights)) {
            let Some(d) = corpus.disagreement(&c.disagreement_id) else { continue };
            let area = sector_box(seg, start, end, split, width);
            let label_box = BoxSize { width: area.width, height: area.height * LABEL_HEIGHT_SHARE };
            let vp_box = BoxSize { width: area.width, height: area.height * (1.0 - LABEL_HEIGHT_SHARE) };
            let vp_max = config.font_min.max(config.font_max * VIEWPOINT_FONT_SHARE);
            let viewpoints = format!("{} | {}", d.affirmative_viewpoint, d.negative_viewpoint);
            let mut strategy_ids: Vec<StrategyId> = corpus
                .session_blocks(&seg.session_id)
                .filter(|b| b.references_disagreement(&d.id))
                .flat_map(|b| b.strategy_tags.iter().map(|t| t.strategy_id.clone()))
                .collect();
            strategy_ids.sort_by_key(|s| (catalog.position(s).unwrap_or(usize::MAX), s.clone()));
            strategy_ids.dedup();
            sectors.push(SectorBlock {
                session_id: seg.session_id.clone(),
                disagreement_id: d.id.clone(),
                clash_point_id: d.clash_point_id.clone(),
                color_key: corpus.clash_point(&d.clash_point_id).map_or(0, |c| c.color_key),
                block_count: c.count,
                start_angle: start,
                end_angle: end,
                inner_offset: split,
                outer_offset: width,
                label: fit_label(&d.label, label_box, config.font_min, config.font_max),
                viewpoints: fit_label(&viewpoints, vp_box, config.font_min, vp_max),
                strategy_ids,
            });
        }
    }
    (ring, sectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{layout_process, ChordColorMode};
    use crate::model::{CorpusBuilder, Side};

    fn text(n: usize) -> String {
        vec!["word"; n].join(" ")
    }

    #[test]
    fn ring_and_sector_partitions() {
        let mut b = CorpusBuilder::new("t", "en");
        b.debater("a1", Side::Affirmative, "A").debater("n1", Side::Negative, "N");
        b.session("s1", "x").turn("t1", "a1");
        for i in 0..4 {
            b.block(&format!("b{i}"), &text(30));
        }
        b.turn("t2", "n1").block("b4", &text(30)).block("b5", &text(30));
        b.clash_point("cp1", "first clash").clash_point("cp2", "second clash").clash_point("cp3", "third clash");
        b.disagreement("d1", "cp1", "first theme", ("yes", "no"), &["b0", "b4"]).disagreement(
            "d2",
            "cp2",
            "second theme",
            ("up", "down"),
            &["b2"],
        );
        b.clash_reference("b1", "cp1").clash_reference("b3", "cp3");
        b.tag("evidence", 0, 1);
        let c = b.build();
        let layout = layout_process(&c, &LayoutConfig::default(), ChordColorMode::BicolorBySide, None).unwrap();
        let phi = layout.segments[0].central_angle;
        // cp1: b0 b1 b4, cp2: b2, cp3: b3
        let spans: Vec<f64> = layout.ring_sections.iter().map(|r| (r.end_angle - r.start_angle) / phi).collect();
        assert!((spans[0] - 0.6).abs() < 1e-12 && (spans[1] - 0.2).abs() < 1e-12 && (spans[2] - 0.2).abs() < 1e-12);
        let widths: Vec<f64> = layout.sector_blocks.iter().map(|s| s.end_angle - s.start_angle).collect();
        assert!((widths[0] / widths[1] - 2.0).abs() < 1e-12);
        // cp3 is referenced but has no disagreement blocks here
        assert!(layout.ring_sections.iter().any(|r| r.clash_point_id == "cp3"));
        assert!(layout.sector_blocks.iter().all(|s| s.clash_point_id != "cp3"));
        let total: f64 = layout.sector_blocks.iter().map(|s| s.end_angle - s.start_angle).sum();
        assert!((total - phi).abs() < 1e-9);
    }
}
