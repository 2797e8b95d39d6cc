//! Stacked-bar geometry of the strategy view.
//!
//! Rows line up with the session circles of the process view (same y
//! interval as each circle's diameter). x starts at 0; the scene places the
//! view. Each row has two lanes, affirmative on top. Within a (row, column)
//! cell units are packed left to right in chronological order across both
//! sides, so a cell is full exactly when the session reached the peak.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::process::SessionCircle;
use super::{LayoutError, Point};
use crate::analytics::{CooccurrenceGroup, Peak, StrategyUsage};
use crate::model::{BlockId, DebateCorpus, SessionId, Side, StrategyId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct StrategyConfig {
    pub unit_width: f64,
    pub column_gap: f64,
    /// Fraction of a lane's height covered by a unit.
    pub unit_fill: f64,
    /// Space between the last column and the icon boxes.
    pub icon_gap: f64,
    pub icon_size: f64,
    pub icon_box_gap: f64,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self { unit_width: 8.0, column_gap: 10.0, unit_fill: 0.6, icon_gap: 24.0, icon_size: 12.0, icon_box_gap: 6.0 }
    }
}

impl StrategyConfig {
    pub fn validate(&self) -> Result<(), LayoutError> {
        let ok = [self.unit_width, self.icon_size].iter().all(|v| v.is_finite() && *v > 0.0)
            && [self.column_gap, self.icon_gap, self.icon_box_gap].iter().all(|v| v.is_finite() && *v >= 0.0)
            && self.unit_fill > 0.0
            && self.unit_fill <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(LayoutError::InvalidConfig("strategy sizes must be positive and unitFill in (0, 1]".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn centroid(&self) -> Point {
        Point::new(self.x + 0.5 * self.width, self.y + 0.5 * self.height)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StrategyRow {
    pub session_id: SessionId,
    pub y_start: f64,
    pub y_end: f64,
}

impl StrategyRow {
    fn lane(&self, side: Side) -> (f64, f64) {
        let h = 0.5 * (self.y_end - self.y_start);
        let top = self.y_start + h * side.index() as f64;
        (top, h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Column {
    pub strategy_id: StrategyId,
    pub icon_key: String,
    pub peak: usize,
    pub x_start: f64,
    pub x_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Unit {
    pub block_id: BlockId,
    pub session_id: SessionId,
    pub strategy_id: StrategyId,
    pub side: Side,
    pub rect: Rect,
}

/// Solid line through the units of one multi-strategy block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UnitPolyline {
    pub block_id: BlockId,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DashedLink {
    pub block_id: BlockId,
    pub icon_box_id: String,
    pub from: Point,
    pub to: Point,
}

/// One (session, side, strategy set) combination with its repeat count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IconBox {
    pub id: String,
    pub session_id: SessionId,
    pub side: Side,
    pub strategy_ids: Vec<StrategyId>,
    pub rect: Rect,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StrategyLayout {
    pub unit_width: f64,
    pub rows: Vec<StrategyRow>,
    pub columns: Vec<Column>,
    pub units: Vec<Unit>,
    pub polylines: Vec<UnitPolyline>,
    pub dashed_links: Vec<DashedLink>,
    pub icon_boxes: Vec<IconBox>,
    /// Left edge of the first column.
    pub x_origin: f64,
    /// Right edge of the widest row of icon boxes, or of the columns.
    pub width: f64,
}

impl StrategyLayout {
    /// The same layout shifted right by `dx`.
    pub fn translated(mut self, dx: f64) -> Self {
        let shift = |p: &mut Point| p.x += dx;
        for c in &mut self.columns {
            c.x_start += dx;
            c.x_end += dx;
        }
        for u in &mut self.units {
            u.rect.x += dx;
        }
        for l in &mut self.polylines {
            l.points.iter_mut().for_each(shift);
        }
        for l in &mut self.dashed_links {
            shift(&mut l.from);
            shift(&mut l.to);
        }
        for b in &mut self.icon_boxes {
            b.rect.x += dx;
        }
        self.x_origin += dx;
        self.width += dx;
        self
    }
}

pub fn layout_strategy(
    corpus: &DebateCorpus,
    circles: &[SessionCircle],
    usage: &StrategyUsage,
    peaks: &[Peak],
    cooccurrence: &[CooccurrenceGroup],
    config: &StrategyConfig,
) -> StrategyLayout {
    let u = config.unit_width;
    let rows: Vec<StrategyRow> = circles
        .iter()
        .map(|c| StrategyRow {
            session_id: c.session_id.clone(),
            y_start: c.center.y - c.radius,
            y_end: c.center.y + c.radius,
        })
        .collect();

    let mut ordered: Vec<&Peak> = peaks.iter().filter(|p| p.peak > 0).collect();
    ordered.sort_by_key(|p| (p.peak, p.catalog_position));
    let mut columns = Vec::with_capacity(ordered.len());
    let mut x = 0.0;
    for p in ordered {
        let width = p.peak as f64 * u;
        let icon_key = corpus.strategy_catalog().get(&p.strategy_id).map(|e| e.icon_key.clone()).unwrap_or_default();
        columns.push(Column {
            strategy_id: p.strategy_id.clone(),
            icon_key,
            peak: p.peak,
            x_start: x,
            x_end: x + width,
        });
        x += width + config.column_gap;
    }
    let columns_end = columns.last().map_or(0.0, |c| c.x_end);

    let mut units = Vec::new();
    let pad = 0.1 * u;
    for row in &rows {
        for col in &columns {
            let mut k = 0usize;
            for b in corpus.session_blocks(&row.session_id) {
                for t in b.strategy_tags.iter().filter(|t| t.strategy_id == col.strategy_id) {
                    let (top, lane_h) = row.lane(b.side);
                    let h = config.unit_fill * lane_h;
                    units.push(Unit {
                        block_id: b.id.clone(),
                        session_id: row.session_id.clone(),
                        strategy_id: t.strategy_id.clone(),
                        side: b.side,
                        rect: Rect {
                            x: col.x_start + k as f64 * u + pad,
                            y: top + 0.5 * (lane_h - h),
                            width: u - 2.0 * pad,
                            height: h,
                        },
                    });
                    k += 1;
                }
            }
        }
    }
    debug_assert!(units_match_usage(&units, usage));

    let mut by_block: HashMap<&BlockId, Vec<&Unit>> = HashMap::new();
    for unit in &units {
        by_block.entry(&unit.block_id).or_default().push(unit);
    }
    for list in by_block.values_mut() {
        list.sort_by(|a, b| a.rect.x.total_cmp(&b.rect.x));
    }

    let mut polylines = Vec::new();
    let mut dashed_links = Vec::new();
    let mut icon_boxes = Vec::new();
    let mut width = columns_end;
    let mut offsets: HashMap<(&SessionId, Side), f64> = HashMap::new();
    for (n, group) in cooccurrence.iter().enumerate() {
        let Some(row) = rows.iter().find(|r| r.session_id == group.session_id) else { continue };
        let offset = offsets.entry((&group.session_id, group.side)).or_insert(columns_end + config.icon_gap);
        let (top, lane_h) = row.lane(group.side);
        let box_w = group.strategy_ids.len() as f64 * config.icon_size + 2.0;
        let box_h = config.icon_size.min(lane_h);
        let rect = Rect { x: *offset, y: top + 0.5 * (lane_h - box_h), width: box_w, height: box_h };
        *offset += box_w + config.icon_box_gap;
        width = width.max(rect.x + rect.width);
        let id = format!("icons-{n}");
        let target = Point::new(rect.x, rect.y + 0.5 * rect.height);
        for block_id in &group.block_ids {
            let Some(list) = by_block.get(block_id) else { continue };
            polylines.push(UnitPolyline {
                block_id: block_id.clone(),
                points: list.iter().map(|u| u.rect.centroid()).collect(),
            });
            dashed_links.push(DashedLink {
                block_id: block_id.clone(),
                icon_box_id: id.clone(),
                from: list[0].rect.centroid(),
                to: target,
            });
        }
        icon_boxes.push(IconBox {
            id,
            session_id: group.session_id.clone(),
            side: group.side,
            strategy_ids: group.strategy_ids.clone(),
            rect,
            multiplicity: group.multiplicity(),
        });
    }
    // Polylines in chronological block order.
    polylines.sort_by_key(|p| corpus.block_rank(&p.block_id));

    StrategyLayout { unit_width: u, rows, columns, units, polylines, dashed_links, icon_boxes, x_origin: 0.0, width }
}

fn units_match_usage(units: &[Unit], usage: &StrategyUsage) -> bool {
    let mut counts: HashMap<(&SessionId, &StrategyId, Side), usize> = HashMap::new();
    for u in units {
        *counts.entry((&u.session_id, &u.strategy_id, u.side)).or_default() += 1;
    }
    usage.sessions.iter().enumerate().all(|(si, s)| {
        usage.strategies.iter().enumerate().all(|(ki, k)| {
            Side::BOTH.iter().all(|&side| counts.get(&(s, k, side)).copied().unwrap_or(0) == usage.count(si, ki, side))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{cooccurrence, peak_usage, strategy_usage};
    use crate::layout::{layout_session_circles, LayoutConfig};
    use crate::model::CorpusBuilder;

    fn build(blocks: &[(&str, Side, &[&str])]) -> DebateCorpus {
        let mut b = CorpusBuilder::new("t", "en");
        b.debater("a1", Side::Affirmative, "A").debater("n1", Side::Negative, "N");
        b.session("s0", "x");
        let mut last: Option<Side> = None;
        for (i, (id, side, tags)) in blocks.iter().enumerate() {
            if last != Some(*side) {
                b.turn(&format!("t{i}"), if *side == Side::Affirmative { "a1" } else { "n1" });
                last = Some(*side);
            }
            b.block(id, "One. Two. Three.");
            for (k, t) in tags.iter().enumerate() {
                b.tag(t, k % 3, k % 3 + 1);
            }
        }
        b.build()
    }

    fn run(c: &DebateCorpus) -> StrategyLayout {
        let config = LayoutConfig::default();
        let circles = layout_session_circles(c, &config);
        let usage = strategy_usage(c);
        layout_strategy(c, &circles, &usage, &peak_usage(&usage), &cooccurrence(c), &config.strategy)
    }

    #[test]
    fn columns_sorted_by_peak() {
        let c = build(&[
            ("b1", Side::Affirmative, &["evidence", "evidence", "evidence"]),
            ("b2", Side::Negative, &["agreement"]),
            ("b3", Side::Negative, &["questioning", "questioning", "questioning"]),
            ("b4", Side::Affirmative, &["questioning", "questioning"]),
        ]);
        let l = run(&c);
        let order: Vec<(&str, usize)> = l.columns.iter().map(|c| (c.strategy_id.as_str(), c.peak)).collect();
        assert_eq!(order, vec![("agreement", 1), ("evidence", 3), ("questioning", 5)]);
        let widths: Vec<f64> = l.columns.iter().map(|c| (c.x_end - c.x_start) / l.unit_width).collect();
        assert_eq!(widths, vec![1.0, 3.0, 5.0]);
        // the questioning cell is full: last unit ends at the column edge
        let q = &l.columns[2];
        let last = l
            .units
            .iter()
            .filter(|u| u.strategy_id == "questioning")
            .map(|u| u.rect.x + u.rect.width)
            .fold(0.0, f64::max);
        assert!((q.x_end - last - 0.1 * l.unit_width).abs() < 1e-9);
    }

    #[test]
    fn combos_share_an_icon_box() {
        let c = build(&[
            ("b1", Side::Negative, &["reasoning", "evidence"]),
            ("b2", Side::Negative, &["evidence", "reasoning", "evidence"]),
            ("b3", Side::Negative, &["reasoning"]),
        ]);
        let l = run(&c);
        assert_eq!(l.icon_boxes.len(), 1);
        assert_eq!(l.icon_boxes[0].multiplicity, 2);
        assert_eq!(l.dashed_links.len(), 2);
        assert!(l.dashed_links.iter().all(|d| d.icon_box_id == l.icon_boxes[0].id));
        let b2 = l.polylines.iter().find(|p| p.block_id == "b2").unwrap();
        assert_eq!(b2.points.len(), 3);
        assert!(b2.points.windows(2).all(|w| w[0].x <= w[1].x));
    }

    #[test]
    fn rows_match_circle_diameters() {
        let c = build(&[("b1", Side::Affirmative, &["evidence"])]);
        let config = LayoutConfig::default();
        let circles = layout_session_circles(&c, &config);
        let l = run(&c);
        assert!((l.rows[0].y_end - l.rows[0].y_start - 2.0 * circles[0].radius).abs() < 1e-9);
    }
}
