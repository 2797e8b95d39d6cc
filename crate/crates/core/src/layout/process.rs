use serde::{Deserialize, Serialize};
use tracing::warn;

use super::chord::{layout_chord_circle, layout_chords, ChordArc, ChordColorMode, ChordShape};
use super::ring::{layout_ring_and_sectors, RingSection, SectorBlock};
use super::spiral::{segment_arc, solve_angle_for_arc};
use super::{partition, rank_normalize, LayoutConfig, LayoutError, LayoutWarning, Point};
use crate::analytics::{interactions_from_paths, side_proportions, SideShares};
use crate::model::{BlockId, ClashPointId, DebateCorpus, SessionId, Side};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleGeometry {
    pub radius: f64,
    /// Distance of the center from the pole.
    pub distance: f64,
}

/// Radii by affine map of session lengths onto the radius bounds, and
/// center distances by tangency starting just outside the chord circle.
pub fn circle_geometry(lengths: &[f64], config: &LayoutConfig) -> Vec<CircleGeometry> {
    let (lo, hi) = (config.circle_radius_min, config.circle_radius_max);
    let mut out: Vec<CircleGeometry> = Vec::with_capacity(lengths.len());
    for t in rank_normalize(lengths) {
        let radius = lo + (hi - lo) * t;
        let distance = match out.last() {
            None => config.chord_circle_radius + config.ring_gap + radius,
            Some(prev) => prev.distance + prev.radius + radius,
        };
        out.push(CircleGeometry { radius, distance });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionCircle {
    pub session_id: SessionId,
    pub center: Point,
    pub distance: f64,
    pub radius: f64,
    /// Side content proportions; absent when the session has no content.
    pub side_split: Option<SideShares>,
}

pub fn layout_session_circles(corpus: &DebateCorpus, config: &LayoutConfig) -> Vec<SessionCircle> {
    let lengths = session_lengths(corpus);
    circle_geometry(&lengths, config)
        .into_iter()
        .zip(corpus.sessions())
        .map(|(g, s)| SessionCircle {
            session_id: s.id.clone(),
            center: Point::new(config.pole_origin.x, config.pole_origin.y - g.distance),
            distance: g.distance,
            radius: g.radius,
            side_split: side_proportions(corpus, &s.id),
        })
        .collect()
}

fn session_lengths(corpus: &DebateCorpus) -> Vec<f64> {
    corpus.sessions().iter().map(|s| corpus.session_content_length(&s.id) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockSubArc {
    pub block_id: BlockId,
    pub side: Side,
    pub start_angle: f64,
    pub end_angle: f64,
}

/// One session as a clockwise piece of `r(θ) = d + bθ`, θ ∈ [0, φ],
/// starting on the upward axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpiralSegment {
    pub session_id: SessionId,
    pub start_radius: f64,
    pub pitch: f64,
    pub central_angle: f64,
    pub start_angle: f64,
    /// Radial rise over the segment, `b·φ`.
    pub rise: f64,
    /// Spacing to the next session's start radius.
    pub spacing: f64,
    /// Width available to the ring and sector bands.
    pub band_width: f64,
    /// Unscaled target in `[arcTargetMin, arcTargetMax]`.
    pub relative_target: f64,
    pub target_arc: f64,
    pub arc_length: f64,
    /// Set when the target needed less than the angle floor.
    pub clamped: bool,
    pub block_sub_arcs: Vec<BlockSubArc>,
}

impl SpiralSegment {
    pub fn radius_at(&self, angle: f64) -> f64 {
        self.start_radius + self.pitch * angle
    }

    pub fn point_at(&self, origin: Point, angle: f64) -> Point {
        origin.polar(self.radius_at(angle), self.start_angle + angle)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpiralLayout {
    /// Global arc scale applied to the relative targets.
    pub scale: f64,
    pub segments: Vec<SpiralSegment>,
    pub warnings: Vec<LayoutWarning>,
}

/// Fits one spiral segment per session.
///
/// Relative targets are affine in the rank-normalized session lengths. The
/// scale `k` is the largest value for which every segment fits within the
/// angle cap. Because arc length grows with angle, that largest `k` is
/// `min_i A_i / s_i` with `A_i` the arc at the cap, so no search is needed;
/// the argmin session lands exactly on the cap.
pub fn layout_spirals(
    corpus: &DebateCorpus,
    circles: &[SessionCircle],
    config: &LayoutConfig,
) -> Result<SpiralLayout, LayoutError> {
    config.validate()?;
    if circles.is_empty() {
        return Err(LayoutError::EmptyCorpus);
    }
    let lengths = session_lengths(corpus);
    let (smin, smax) = (config.arc_target_min, config.arc_target_max);
    let relative: Vec<f64> = rank_normalize(&lengths).into_iter().map(|t| smin + (smax - smin) * t).collect();
    let spacing: Vec<f64> = (0..circles.len())
        .map(|i| match circles.get(i + 1) {
            Some(next) => next.distance - circles[i].distance,
            None => 2.0 * circles[i].radius,
        })
        .collect();
    let p = config.pitch_fraction;
    let scale = circles
        .iter()
        .zip(&spacing)
        .zip(&relative)
        .map(|((c, dl), s)| segment_arc(c.distance, p * dl, config.angle_max) / s)
        .fold(f64::INFINITY, f64::min);

    let mut segments = Vec::with_capacity(circles.len());
    let mut warnings = Vec::new();
    for (i, c) in circles.iter().enumerate() {
        let rise = p * spacing[i];
        let target = scale * relative[i];
        let (phi, clamped) = match solve_angle_for_arc(c.distance, rise, target, config) {
            Ok(phi) => (phi, false),
            Err(LayoutError::AngleFloorUnmet { min_arc, .. }) => {
                warn!(session = %c.session_id, target, min_arc, "segment clamped to the angle floor");
                warnings.push(LayoutWarning::AngleFloorUnmet {
                    session_id: c.session_id.clone(),
                    target_arc: target,
                    floor_arc: min_arc,
                });
                (config.angle_min, true)
            }
            Err(e) => return Err(e),
        };
        let block_sub_arcs = sub_arcs(corpus, &c.session_id, phi);
        segments.push(SpiralSegment {
            session_id: c.session_id.clone(),
            start_radius: c.distance,
            pitch: rise / phi,
            central_angle: phi,
            start_angle: 0.0,
            rise,
            spacing: spacing[i],
            band_width: (1.0 - p) * spacing[i] - config.ring_gap,
            relative_target: relative[i],
            target_arc: target,
            arc_length: segment_arc(c.distance, rise, phi),
            clamped,
            block_sub_arcs,
        });
    }
    Ok(SpiralLayout { scale, segments, warnings })
}

fn sub_arcs(corpus: &DebateCorpus, session: &SessionId, phi: f64) -> Vec<BlockSubArc> {
    let blocks: Vec<_> = corpus.session_blocks(session).collect();
    let weights: Vec<f64> = blocks.iter().map(|b| b.content_length as f64).collect();
    partition(0.0, phi, &weights)
        .into_iter()
        .zip(blocks)
        .map(|((s, e), b)| BlockSubArc { block_id: b.id.clone(), side: b.side, start_angle: s, end_angle: e })
        .collect()
}

/// Complete process-view geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProcessLayout {
    pub origin: Point,
    pub chord_circle_radius: f64,
    pub scale: f64,
    pub circles: Vec<SessionCircle>,
    pub segments: Vec<SpiralSegment>,
    pub chord_arcs: Vec<ChordArc>,
    pub chords: Vec<ChordShape>,
    pub ring_sections: Vec<RingSection>,
    pub sector_blocks: Vec<SectorBlock>,
    pub warnings: Vec<LayoutWarning>,
}

impl ProcessLayout {
    /// Largest radius reached by any band.
    pub fn outer_radius(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.start_radius + s.rise + s.band_width.max(0.0))
            .chain(self.circles.iter().map(|c| c.distance + c.radius))
            .fold(self.chord_circle_radius, f64::max)
    }
}

/// Lays out every process-view layer. With a clash filter only that clash
/// point's interactions become chords, colored by the clash point.
pub fn layout_process(
    corpus: &DebateCorpus,
    config: &LayoutConfig,
    mode: ChordColorMode,
    clash_filter: Option<&ClashPointId>,
) -> Result<ProcessLayout, LayoutError> {
    config.validate()?;
    if corpus.sessions().is_empty() {
        return Err(LayoutError::EmptyCorpus);
    }
    let circles = layout_session_circles(corpus, config);
    let spirals = layout_spirals(corpus, &circles, config)?;
    let chord_arcs = layout_chord_circle(corpus, config);
    let interactions = interactions_from_paths(corpus);
    let chords = layout_chords(corpus, &interactions, &chord_arcs, mode, clash_filter);
    let (ring_sections, sector_blocks) = layout_ring_and_sectors(corpus, &spirals.segments, config);
    Ok(ProcessLayout {
        origin: config.pole_origin,
        chord_circle_radius: config.chord_circle_radius,
        scale: spirals.scale,
        circles,
        segments: spirals.segments,
        chord_arcs,
        chords,
        ring_sections,
        sector_blocks,
        warnings: spirals.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CorpusBuilder;

    #[test]
    fn radii_and_tangency() {
        let config = LayoutConfig {
            chord_circle_radius: 15.0,
            ring_gap: 5.0,
            circle_radius_min: 10.0,
            circle_radius_max: 20.0,
            ..Default::default()
        };
        let g = circle_geometry(&[100.0, 400.0, 100.0], &config);
        let radii: Vec<f64> = g.iter().map(|c| c.radius).collect();
        let dists: Vec<f64> = g.iter().map(|c| c.distance).collect();
        assert_eq!(radii, vec![10.0, 20.0, 10.0]);
        assert_eq!(dists, vec![30.0, 60.0, 90.0]);
        let single = circle_geometry(&[50.0], &config);
        assert_eq!(single[0].distance, 20.0 + single[0].radius);
        let equal = circle_geometry(&[7.0, 7.0], &config);
        assert!(equal.iter().all(|c| c.radius == 15.0));
    }

    fn words(n: usize) -> String {
        vec!["w"; n].join(" ")
    }

    fn corpus(sessions: &[&[usize]]) -> DebateCorpus {
        let mut b = CorpusBuilder::new("t", "en");
        b.debater("a1", Side::Affirmative, "A").debater("n1", Side::Negative, "N");
        let mut n = 0;
        for (i, blocks) in sessions.iter().enumerate() {
            b.session(&format!("s{i}"), "x").turn(&format!("t{i}"), if i % 2 == 0 { "a1" } else { "n1" });
            for len in blocks.iter() {
                n += 1;
                b.block(&format!("b{n}"), &words(*len));
            }
        }
        b.build()
    }

    #[test]
    fn sub_arcs_are_proportional() {
        let c = corpus(&[&[30, 70], &[50]]);
        let config = LayoutConfig::default();
        let circles = layout_session_circles(&c, &config);
        let sp = layout_spirals(&c, &circles, &config).unwrap();
        let seg = &sp.segments[0];
        let phi = seg.central_angle;
        let a = &seg.block_sub_arcs;
        assert!((a[0].end_angle - 0.3 * phi).abs() < 1e-12);
        assert_eq!(a[1].end_angle, phi);
    }

    #[test]
    fn identical_sessions_match() {
        let c = corpus(&[&[40], &[40]]);
        let config = LayoutConfig::default();
        let circles = layout_session_circles(&c, &config);
        let sp = layout_spirals(&c, &circles, &config).unwrap();
        assert_eq!(sp.segments[0].target_arc, sp.segments[1].target_arc);
        assert_eq!(sp.segments[0].relative_target, sp.segments[1].relative_target);
    }

    #[test]
    fn single_session_uses_full_cap() {
        let c = corpus(&[&[10, 20]]);
        let config = LayoutConfig::default();
        let layout = layout_process(&c, &config, ChordColorMode::BicolorBySide, None).unwrap();
        assert_eq!(layout.segments[0].central_angle, config.angle_max);
    }

    #[test]
    fn doubling_lengths_keeps_layout() {
        let config = LayoutConfig::default();
        let a =
            layout_process(&corpus(&[&[10, 20], &[5], &[30]]), &config, ChordColorMode::BicolorBySide, None).unwrap();
        let b =
            layout_process(&corpus(&[&[20, 40], &[10], &[60]]), &config, ChordColorMode::BicolorBySide, None).unwrap();
        assert_eq!(a.circles, b.circles);
        assert_eq!(a.segments, b.segments);
        assert_eq!(a.chord_arcs, b.chord_arcs);
    }
}
