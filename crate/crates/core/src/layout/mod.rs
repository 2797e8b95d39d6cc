//! Geometry for the process view and the strategy view.
//!
//! Angles follow one convention everywhere: radians measured clockwise from
//! the upward vertical axis through the pole. Points use screen
//! coordinates (y grows downward), so a polar point `(r, θ)` maps to
//! `(x0 + r·sin θ, y0 − r·cos θ)`.

mod chord;
mod label;
mod process;
mod ring;
mod spiral;
mod strategy;
pub mod verify;

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::ShareWeighting;
use crate::model::SessionId;

pub use chord::{layout_chord_circle, layout_chords, ChordArc, ChordColorMode, ChordRun, ChordShape, Paint};
pub use label::{estimate_text_width, fit_label, fits, wrap_text, BoxSize, LabelFit, FONT_STEP, LINE_HEIGHT};
pub use process::{
    circle_geometry, layout_process, layout_session_circles, layout_spirals, BlockSubArc, CircleGeometry,
    ProcessLayout, SessionCircle, SpiralLayout, SpiralSegment,
};
pub use ring::{layout_ring_and_sectors, RingSection, SectorBlock};
pub use spiral::{solve_angle_for_arc, spiral_arc_length, spiral_arc_length_closed_form, spiral_arc_length_quadrature};
pub use strategy::{
    layout_strategy, Column, DashedLink, IconBox, Rect, StrategyConfig, StrategyLayout, StrategyRow, Unit, UnitPolyline,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Polar point around `self` with the angle convention of this module.
    pub fn polar(self, radius: f64, angle: f64) -> Point {
        Point { x: self.x + radius * angle.sin(), y: self.y - radius * angle.cos() }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("negative radius {radius} at angle {angle}")]
    NegativeRadius { radius: f64, angle: f64 },
    #[error("target arc {target} exceeds the arc {max_arc} reachable at the angle cap")]
    AngleCapExceeded { target: f64, max_arc: f64 },
    #[error("target arc {target} is shorter than the arc {min_arc} at the angle floor")]
    AngleFloorUnmet { target: f64, min_arc: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid layout config: {0}")]
    InvalidConfig(String),
    #[error("corpus has no sessions")]
    EmptyCorpus,
}

/// Non-fatal layout conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum LayoutWarning {
    /// The session's target arc needed less than the angle floor; its angle
    /// was clamped up to the floor.
    AngleFloorUnmet { session_id: SessionId, target_arc: f64, floor_arc: f64 },
}

/// Free parameters of the process-view layout. Every field has a default,
/// so a partial JSON object is a valid config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct LayoutConfig {
    pub pole_origin: Point,
    pub chord_circle_radius: f64,
    /// Gap between the chord circle and the first session, and between a
    /// session's outer band and the next session's spiral.
    pub ring_gap: f64,
    pub circle_radius_min: f64,
    pub circle_radius_max: f64,
    pub arc_target_min: f64,
    pub arc_target_max: f64,
    pub angle_min: f64,
    pub angle_max: f64,
    /// Share of the inter-session spacing taken by a segment's radial rise.
    pub pitch_fraction: f64,
    /// Share of a session's band width used by the clash-point ring.
    pub ring_fraction: f64,
    pub font_min: f64,
    pub font_max: f64,
    /// Relative tolerance on realized arc lengths.
    pub arc_tolerance: f64,
    /// Angular gap between session arcs on the chord circle.
    pub chord_gap: f64,
    pub share_weighting: ShareWeighting,
    pub strategy: StrategyConfig,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            pole_origin: Point::new(0.0, 0.0),
            chord_circle_radius: 320.0,
            ring_gap: 6.0,
            circle_radius_min: 16.0,
            circle_radius_max: 32.0,
            arc_target_min: 2.0,
            arc_target_max: 3.0,
            angle_min: PI / 3.0,
            angle_max: 2.0 * PI,
            pitch_fraction: 0.3,
            ring_fraction: 0.25,
            font_min: 5.0,
            font_max: 14.0,
            arc_tolerance: 1e-6,
            chord_gap: 0.04,
            share_weighting: ShareWeighting::BlockCount,
            strategy: StrategyConfig::default(),
        }
    }
}

impl LayoutConfig {
    pub fn validate(&self) -> Result<(), LayoutError> {
        let bad = |msg: &str| Err(LayoutError::InvalidConfig(msg.to_string()));
        let finite = [
            self.pole_origin.x,
            self.pole_origin.y,
            self.chord_circle_radius,
            self.ring_gap,
            self.circle_radius_min,
            self.circle_radius_max,
            self.arc_target_min,
            self.arc_target_max,
            self.angle_min,
            self.angle_max,
            self.pitch_fraction,
            self.ring_fraction,
            self.font_min,
            self.font_max,
            self.arc_tolerance,
            self.chord_gap,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("all parameters must be finite");
        }
        if !(0.0 < self.arc_target_min && self.arc_target_min < self.arc_target_max) {
            return bad("need 0 < arcTargetMin < arcTargetMax");
        }
        if !(0.0 < self.angle_min && self.angle_min < self.angle_max && self.angle_max <= 2.0 * PI + 1e-12) {
            return bad("need 0 < angleMin < angleMax <= 2π");
        }
        if !(0.0 < self.pitch_fraction && self.pitch_fraction < 1.0) {
            return bad("need 0 < pitchFraction < 1");
        }
        if !(0.0 < self.ring_fraction && self.ring_fraction < 1.0) {
            return bad("need 0 < ringFraction < 1");
        }
        if !(0.0 < self.circle_radius_min && self.circle_radius_min <= self.circle_radius_max) {
            return bad("need 0 < circleRadiusMin <= circleRadiusMax");
        }
        if self.chord_circle_radius <= 0.0 || self.ring_gap < 0.0 {
            return bad("chordCircleRadius must be positive and ringGap nonnegative");
        }
        if (1.0 - self.pitch_fraction) * 2.0 * self.circle_radius_min <= self.ring_gap {
            return bad("sessions too tight: (1 - pitchFraction) * 2 * circleRadiusMin must exceed ringGap");
        }
        if !(0.0 < self.font_min && self.font_min <= self.font_max) {
            return bad("need 0 < fontMin <= fontMax");
        }
        if !(0.0 < self.arc_tolerance && self.arc_tolerance < 1.0) {
            return bad("arcTolerance must lie in (0, 1)");
        }
        let n_gap_budget = self.chord_gap * 64.0;
        if self.chord_gap < 0.0 || n_gap_budget >= 2.0 * PI {
            return bad("chordGap must be nonnegative and leave room for 64 sessions");
        }
        self.strategy.validate()
    }
}

/// Maps values affinely onto [0, 1] by their min and max; all-equal inputs
/// map to 0.5.
pub(crate) fn rank_normalize(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi.partial_cmp(&lo) != Some(Ordering::Greater) {
        return vec![0.5; values.len()];
    }
    values.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

/// Splits `[start, start + extent]` proportionally to `weights`, with the
/// final boundary pinned to the exact end. Zero total weight splits evenly.
pub(crate) fn partition(start: f64, extent: f64, weights: &[f64]) -> Vec<(f64, f64)> {
    let n = weights.len();
    if n == 0 {
        return Vec::new();
    }
    let total: f64 = weights.iter().sum();
    let even = total.partial_cmp(&0.0) != Some(Ordering::Greater);
    let end = start + extent;
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    let mut lo = start;
    for (i, w) in weights.iter().enumerate() {
        acc += if even { 1.0 } else { *w };
        let denom = if even { n as f64 } else { total };
        let hi = if i + 1 == n { end } else { start + extent * (acc / denom) };
        out.push((lo, hi));
        lo = hi;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        LayoutConfig::default().validate().unwrap();
    }

    #[test]
    fn partial_json_config() {
        let c: LayoutConfig = serde_json::from_str(r#"{"pitchFraction": 0.4}"#).unwrap();
        assert_eq!(c.pitch_fraction, 0.4);
        assert_eq!(c.ring_fraction, 0.25);
        assert!(serde_json::from_str::<LayoutConfig>(r#"{"nope": 1}"#).is_err());
    }

    #[test]
    fn invalid_configs_rejected() {
        let c = LayoutConfig { arc_target_min: 3.0, arc_target_max: 2.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = LayoutConfig { angle_max: 7.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = LayoutConfig { pitch_fraction: 1.0, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn partition_is_exact() {
        let p = partition(0.0, 1.7, &[30.0, 70.0]);
        assert!((p[0].1 - 0.3 * 1.7).abs() < 1e-15);
        assert_eq!(p[1].1, 1.7);
        let p = partition(1.0, 2.0, &[0.0, 0.0]);
        assert_eq!(p, vec![(1.0, 2.0), (2.0, 3.0)]);
    }

    #[test]
    fn normalize_degenerate() {
        assert_eq!(rank_normalize(&[5.0, 5.0]), vec![0.5, 0.5]);
        assert_eq!(rank_normalize(&[100.0, 400.0, 100.0]), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn polar_convention() {
        let o = Point::new(10.0, 10.0);
        let up = o.polar(5.0, 0.0);
        assert!((up.x - 10.0).abs() < 1e-12 && (up.y - 5.0).abs() < 1e-12);
        let right = o.polar(5.0, PI / 2.0);
        assert!((right.x - 15.0).abs() < 1e-12 && (right.y - 10.0).abs() < 1e-12);
    }
}
