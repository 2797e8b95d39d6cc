//! Independent checks of finished layouts.
//!
//! Every check recomputes its expectation from the corpus and the config
//! rather than reusing layout internals: arc lengths by quadrature, block
//! order from the turn lists, interactions from the raw paths. Used by the
//! property suites and handy when debugging a new config.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;
use std::fmt;

use super::chord::ChordColorMode;
use super::process::ProcessLayout;
use super::spiral::spiral_arc_length_quadrature;
use super::strategy::StrategyLayout;
use super::LayoutConfig;
use crate::analytics::{strategy_usage, ShareWeighting};
use crate::model::{BlockId, ClashPointId, DebateCorpus, DisagreementId, SessionId, Side, StrategyId};

/// Absolute tolerance for sums and tangency.
pub const GEOMETRY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.detail)
    }
}

#[derive(Default)]
struct Report(Vec<Violation>);

impl Report {
    fn check(&mut self, ok: bool, invariant: &'static str, detail: impl FnOnce() -> String) {
        if !ok {
            self.0.push(Violation { invariant, detail: detail() });
        }
    }
}

fn close(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps
}

/// Blocks of each session in (turn, block) order, read from the turn lists.
fn chronological_blocks(corpus: &DebateCorpus) -> Vec<(SessionId, Vec<BlockId>)> {
    corpus
        .sessions()
        .iter()
        .map(|s| {
            let ids =
                s.turn_ids.iter().filter_map(|t| corpus.turn(t)).flat_map(|t| t.block_ids.iter().cloned()).collect();
            (s.id.clone(), ids)
        })
        .collect()
}

fn session_length(corpus: &DebateCorpus, blocks: &[BlockId]) -> f64 {
    blocks.iter().filter_map(|b| corpus.block(b)).map(|b| b.content_length as f64).sum()
}

/// Checks tiling of `[0, phi]` by consecutive intervals proportional to
/// `weights` (equal pieces when every weight is zero).
fn check_tiling(
    report: &mut Report,
    invariant: &'static str,
    session: &SessionId,
    intervals: &[(f64, f64)],
    weights: &[f64],
    phi: f64,
) {
    if intervals.is_empty() {
        return;
    }
    let total: f64 = weights.iter().sum();
    let mut cursor = 0.0;
    let mut sum = 0.0;
    for (i, &(s, e)) in intervals.iter().enumerate() {
        report.check(close(s, cursor, GEOMETRY_EPS), invariant, || {
            format!("{session}: piece {i} starts at {s}, expected {cursor}")
        });
        report.check(e >= s, invariant, || format!("{session}: piece {i} is reversed"));
        let expected = if total > 0.0 { phi * weights[i] / total } else { phi / intervals.len() as f64 };
        report.check(close(e - s, expected, GEOMETRY_EPS), invariant, || {
            format!("{session}: piece {i} spans {}, expected {expected}", e - s)
        });
        sum += e - s;
        cursor = e;
    }
    report
        .check(close(sum, phi, GEOMETRY_EPS), invariant, || format!("{session}: pieces sum to {sum}, expected {phi}"));
}

/// Every process-view invariant. `clash_filter` is the clash point the
/// layout was built for, if any.
pub fn verify_process(
    corpus: &DebateCorpus,
    config: &LayoutConfig,
    layout: &ProcessLayout,
    mode: ChordColorMode,
    clash_filter: Option<&ClashPointId>,
) -> Vec<Violation> {
    let mut r = Report::default();
    let sessions = chronological_blocks(corpus);
    let n = sessions.len();
    r.check(layout.circles.len() == n && layout.segments.len() == n, "session count", || {
        format!("{} circles and {} segments for {n} sessions", layout.circles.len(), layout.segments.len())
    });
    if layout.circles.len() != n || layout.segments.len() != n {
        return r.0;
    }
    let lengths: Vec<f64> = sessions.iter().map(|(_, b)| session_length(corpus, b)).collect();

    // Circles: radius bounds and tangency.
    for (i, c) in layout.circles.iter().enumerate() {
        r.check(c.session_id == sessions[i].0, "session order", || format!("circle {i} is {}", c.session_id));
        r.check(
            c.radius >= config.circle_radius_min - GEOMETRY_EPS && c.radius <= config.circle_radius_max + GEOMETRY_EPS,
            "radius bounds",
            || format!("{}: radius {}", c.session_id, c.radius),
        );
        let expected = match i {
            0 => config.chord_circle_radius + config.ring_gap + c.radius,
            _ => layout.circles[i - 1].distance + layout.circles[i - 1].radius + c.radius,
        };
        r.check(close(c.distance, expected, GEOMETRY_EPS), "tangency", || {
            format!("{}: distance {} but expected {expected}", c.session_id, c.distance)
        });
        let pole_gap = c.center.distance(layout.origin);
        r.check(close(pole_gap, c.distance, GEOMETRY_EPS), "circle on axis", || {
            format!("{}: center {pole_gap} from the pole, distance {}", c.session_id, c.distance)
        });
    }

    // Relative targets, recomputed from the raw lengths.
    let (lo, hi) = lengths.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| (lo.min(l), hi.max(l)));
    let (smin, smax) = (config.arc_target_min, config.arc_target_max);
    let relative: Vec<f64> = lengths
        .iter()
        .map(|&l| if hi > lo { smin + (smax - smin) * (l - lo) / (hi - lo) } else { 0.5 * (smin + smax) })
        .collect();

    let p = config.pitch_fraction;
    let mut max_phi: f64 = 0.0;
    for (i, seg) in layout.segments.iter().enumerate() {
        let sid = &seg.session_id;
        let circle = &layout.circles[i];
        r.check(*sid == sessions[i].0, "session order", || format!("segment {i} is {sid}"));
        r.check(seg.start_angle == 0.0, "axis start", || format!("{sid}: starts at {}", seg.start_angle));
        r.check(close(seg.start_radius, circle.distance, GEOMETRY_EPS), "segment start", || {
            format!("{sid}: starts at radius {} but circle sits at {}", seg.start_radius, circle.distance)
        });
        let phi = seg.central_angle;
        max_phi = max_phi.max(phi);
        r.check(
            phi >= config.angle_min - GEOMETRY_EPS && phi <= config.angle_max + GEOMETRY_EPS,
            "angle bounds",
            || format!("{sid}: central angle {phi}"),
        );

        // Non-overlap against the next session's spiral start.
        let spacing = match layout.circles.get(i + 1) {
            Some(next) => next.distance - circle.distance,
            None => 2.0 * circle.radius,
        };
        let rise = p * spacing;
        r.check(close(seg.pitch * phi, rise, GEOMETRY_EPS), "pitch", || {
            format!("{sid}: rise {} but expected {rise}", seg.pitch * phi)
        });
        r.check(seg.band_width > 0.0, "band width", || format!("{sid}: band width {}", seg.band_width));
        if let Some(next) = layout.circles.get(i + 1) {
            let outer = circle.distance + rise + seg.band_width;
            r.check(outer <= next.distance - config.ring_gap + GEOMETRY_EPS, "non-overlap", || {
                format!("{sid}: outer band at {outer}, next spiral at {}", next.distance)
            });
        }

        // Arc fidelity against quadrature.
        r.check(close(seg.relative_target, relative[i], 1e-12), "relative target", || {
            format!("{sid}: relative target {} but expected {}", seg.relative_target, relative[i])
        });
        let target = layout.scale * relative[i];
        match spiral_arc_length_quadrature(seg.start_radius, seg.pitch, 0.0, phi) {
            Ok(arc) if seg.clamped => {
                r.check(arc >= target * (1.0 - config.arc_tolerance), "arc fidelity", || {
                    format!("{sid}: clamped arc {arc} below target {target}")
                });
                r.check(close(phi, config.angle_min, 0.0), "angle floor", || format!("{sid}: clamped at {phi}"));
            }
            Ok(arc) => r.check((arc - target).abs() <= config.arc_tolerance * target, "arc fidelity", || {
                format!("{sid}: arc {arc} vs target {target} (relative {:e})", (arc - target).abs() / target)
            }),
            Err(e) => r.check(false, "arc fidelity", || format!("{sid}: {e}")),
        }

        // Sub-arcs in (turn, block) order, proportional to content.
        let expected_ids = &sessions[i].1;
        let ids: Vec<&BlockId> = seg.block_sub_arcs.iter().map(|a| &a.block_id).collect();
        r.check(ids.iter().copied().eq(expected_ids.iter()), "sub-arc order", || format!("{sid}: {ids:?}"));
        let intervals: Vec<(f64, f64)> = seg.block_sub_arcs.iter().map(|a| (a.start_angle, a.end_angle)).collect();
        let weights: Vec<f64> = seg
            .block_sub_arcs
            .iter()
            .map(|a| corpus.block(&a.block_id).map_or(0.0, |b| b.content_length as f64))
            .collect();
        check_tiling(&mut r, "sub-arc partition", sid, &intervals, &weights, phi);
        if let Some(last) = seg.block_sub_arcs.last() {
            r.check(last.end_angle == phi, "sub-arc partition", || {
                format!("{sid}: last sub-arc ends at {}", last.end_angle)
            });
        }
    }
    r.check(close(max_phi, config.angle_max, config.arc_tolerance * config.angle_max), "scale maximal", || {
        format!("largest central angle {max_phi} short of the cap {}", config.angle_max)
    });

    // Order preservation and bounded contrast of the absolute targets.
    for i in 0..n {
        for j in 0..n {
            let (ti, tj) = (layout.segments[i].target_arc, layout.segments[j].target_arc);
            if lengths[i] < lengths[j] {
                r.check(ti < tj, "order preservation", || {
                    format!("sessions {i} < {j} by length but targets {ti} >= {tj}")
                });
            } else if lengths[i] == lengths[j] && i < j {
                r.check(ti == tj, "order preservation", || {
                    format!("sessions {i} and {j} tie but targets {ti} != {tj}")
                });
            }
        }
    }
    let targets: Vec<f64> = layout.segments.iter().map(|s| s.target_arc).collect();
    let tmax = targets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tmin = targets.iter().copied().fold(f64::INFINITY, f64::min);
    r.check(tmin > 0.0 && tmax / tmin <= (smax / smin) * (1.0 + 1e-12), "bounded contrast", || {
        format!("max/min target {} exceeds {}", tmax / tmin, smax / smin)
    });
    for (seg, rel) in layout.segments.iter().zip(&relative) {
        r.check(close(seg.target_arc, layout.scale * rel, 1e-9 * seg.target_arc), "target scale", || {
            format!("{}: target {} but k·s = {}", seg.session_id, seg.target_arc, layout.scale * rel)
        });
    }

    verify_chords(&mut r, corpus, config, layout, &sessions, mode, clash_filter);
    verify_bands(&mut r, corpus, config, layout);
    r.0
}

fn verify_chords(
    r: &mut Report,
    corpus: &DebateCorpus,
    config: &LayoutConfig,
    layout: &ProcessLayout,
    sessions: &[(SessionId, Vec<BlockId>)],
    mode: ChordColorMode,
    clash_filter: Option<&ClashPointId>,
) {
    // Session arcs: ordered, disjoint, inside one turn, proportional to content.
    let arcs = &layout.chord_arcs;
    r.check(arcs.len() == sessions.len(), "chord arcs", || {
        format!("{} arcs for {} sessions", arcs.len(), sessions.len())
    });
    let total: f64 = sessions.iter().map(|(_, b)| session_length(corpus, b)).sum();
    let usable = 2.0 * PI - config.chord_gap * sessions.len() as f64;
    let mut prev_end = 0.0;
    for (i, a) in arcs.iter().enumerate() {
        r.check(a.start_angle >= prev_end - GEOMETRY_EPS && a.end_angle >= a.start_angle, "chord arcs", || {
            format!("{}: [{}, {}] after {prev_end}", a.session_id, a.start_angle, a.end_angle)
        });
        if let Some((_, blocks)) = sessions.get(i) {
            let expected = if total > 0.0 {
                usable * session_length(corpus, blocks) / total
            } else {
                usable / sessions.len() as f64
            };
            r.check(close(a.end_angle - a.start_angle, expected, GEOMETRY_EPS), "chord arcs", || {
                format!("{}: spans {}, expected {expected}", a.session_id, a.end_angle - a.start_angle)
            });
        }
        prev_end = a.end_angle;
    }
    r.check(prev_end <= 2.0 * PI + GEOMETRY_EPS, "chord arcs", || format!("arcs end at {prev_end}"));
    let arc_of: HashMap<&SessionId, (f64, f64)> =
        arcs.iter().map(|a| (&a.session_id, (a.start_angle, a.end_angle))).collect();

    // Expected interactions straight from the paths.
    let mut expected: BTreeMap<(DisagreementId, BlockId, BlockId), usize> = BTreeMap::new();
    for d in corpus.disagreements() {
        if clash_filter.is_some_and(|c| *c != d.clash_point_id) {
            continue;
        }
        for pair in d.path.windows(2) {
            *expected.entry((d.id.clone(), pair[0].clone(), pair[1].clone())).or_default() += 1;
        }
    }
    let expected_count: usize = expected.values().sum();
    r.check(layout.chords.len() == expected_count, "chord count", || {
        format!("{} chords for {expected_count} interactions", layout.chords.len())
    });
    let mut seen: BTreeMap<(DisagreementId, BlockId, BlockId), usize> = BTreeMap::new();
    for c in &layout.chords {
        *seen.entry((c.disagreement_id.clone(), c.from_block_id.clone(), c.to_block_id.clone())).or_default() += 1;
        for (block, session, angle) in
            [(&c.from_block_id, &c.from_session_id, c.from_angle), (&c.to_block_id, &c.to_session_id, c.to_angle)]
        {
            let Some(b) = corpus.block(block) else {
                r.check(false, "chord endpoints", || format!("unknown block {block}"));
                continue;
            };
            r.check(b.session_id == *session, "chord endpoints", || format!("{block} is not in {session}"));
            let inside =
                arc_of.get(&b.session_id).is_some_and(|&(s, e)| angle >= s - GEOMETRY_EPS && angle <= e + GEOMETRY_EPS);
            r.check(inside, "chord endpoints", || format!("{block}: angle {angle} outside its session arc"));
        }
        let (from, to) = (corpus.block(&c.from_block_id), corpus.block(&c.to_block_id));
        if let (Some(from), Some(to)) = (from, to) {
            r.check(c.same_side == (from.side == to.side), "chord sides", || format!("{} -> {}", from.id, to.id));
            if mode == ChordColorMode::BicolorBySide && clash_filter.is_none() {
                r.check(c.is_bicolor() == !c.same_side, "bicolor", || format!("{} -> {}", from.id, to.id));
            }
        }
    }
    r.check(seen == expected, "chord set", || "chords differ from the path-induced interactions".to_string());
}

fn verify_bands(r: &mut Report, corpus: &DebateCorpus, config: &LayoutConfig, layout: &ProcessLayout) {
    for seg in &layout.segments {
        let sid = &seg.session_id;
        let phi = seg.central_angle;
        let blocks: Vec<_> = corpus.blocks().iter().filter(|b| b.session_id == *sid).collect();

        let mut clash_weight: BTreeMap<&ClashPointId, f64> = BTreeMap::new();
        for b in &blocks {
            let w = match config.share_weighting {
                ShareWeighting::BlockCount => 1.0,
                ShareWeighting::ContentLength => b.content_length as f64,
            };
            for c in &b.clash_point_ids {
                *clash_weight.entry(c).or_default() += w;
            }
        }
        clash_weight.retain(|_, w| *w > 0.0);
        let sections: Vec<_> = layout.ring_sections.iter().filter(|s| s.session_id == *sid).collect();
        let ids: BTreeSet<&ClashPointId> = sections.iter().map(|s| &s.clash_point_id).collect();
        r.check(ids.len() == sections.len() && ids == clash_weight.keys().copied().collect(), "ring sections", || {
            format!("{sid}: sections {ids:?}, expected {:?}", clash_weight.keys().collect::<Vec<_>>())
        });
        let intervals: Vec<(f64, f64)> = sections.iter().map(|s| (s.start_angle, s.end_angle)).collect();
        let weights: Vec<f64> =
            sections.iter().map(|s| clash_weight.get(&s.clash_point_id).copied().unwrap_or(0.0)).collect();
        check_tiling(r, "ring partition", sid, &intervals, &weights, phi);

        let mut counts: BTreeMap<&DisagreementId, f64> = BTreeMap::new();
        for b in &blocks {
            for d in &b.disagreement_ids {
                if corpus.disagreement(d).is_some() {
                    *counts.entry(d).or_default() += 1.0;
                }
            }
        }
        let sectors: Vec<_> = layout.sector_blocks.iter().filter(|s| s.session_id == *sid).collect();
        let ids: BTreeSet<&DisagreementId> = sectors.iter().map(|s| &s.disagreement_id).collect();
        r.check(ids.len() == sectors.len() && ids == counts.keys().copied().collect(), "sector blocks", || {
            format!("{sid}: sectors {ids:?}, expected {:?}", counts.keys().collect::<Vec<_>>())
        });
        let intervals: Vec<(f64, f64)> = sectors.iter().map(|s| (s.start_angle, s.end_angle)).collect();
        let weights: Vec<f64> =
            sectors.iter().map(|s| counts.get(&s.disagreement_id).copied().unwrap_or(0.0)).collect();
        check_tiling(r, "sector partition", sid, &intervals, &weights, phi);
        for s in &sectors {
            let font = s.label.font_size;
            r.check(
                s.label.truncated || (font >= config.font_min - GEOMETRY_EPS && font <= config.font_max + GEOMETRY_EPS),
                "sector font",
                || format!("{sid}/{}: font {font}", s.disagreement_id),
            );
        }
    }
}

/// Every strategy-view invariant. `circles` are the process view's session
/// circles the rows were matched to.
pub fn verify_strategy(
    corpus: &DebateCorpus,
    layout: &StrategyLayout,
    circles: &[super::SessionCircle],
) -> Vec<Violation> {
    let mut r = Report::default();
    let u = layout.unit_width;

    r.check(layout.rows.len() == circles.len(), "rows", || {
        format!("{} rows for {} circles", layout.rows.len(), circles.len())
    });
    for (row, c) in layout.rows.iter().zip(circles) {
        r.check(row.session_id == c.session_id, "rows", || {
            format!("row {} against circle {}", row.session_id, c.session_id)
        });
        r.check(close(row.y_end - row.y_start, 2.0 * c.radius, GEOMETRY_EPS), "row height", || {
            format!("{}: height {} vs diameter {}", row.session_id, row.y_end - row.y_start, 2.0 * c.radius)
        });
    }

    // Peaks recomputed from raw tags: both sides combined, per session.
    let mut per_session: HashMap<(&SessionId, &StrategyId), usize> = HashMap::new();
    for b in corpus.blocks() {
        for t in &b.strategy_tags {
            *per_session.entry((&b.session_id, &t.strategy_id)).or_default() += 1;
        }
    }
    let mut peaks: BTreeMap<&StrategyId, usize> = BTreeMap::new();
    for ((_, k), n) in &per_session {
        let p = peaks.entry(k).or_default();
        *p = (*p).max(*n);
    }
    let column_ids: BTreeSet<&StrategyId> = layout.columns.iter().map(|c| &c.strategy_id).collect();
    r.check(column_ids == peaks.keys().copied().collect(), "columns", || format!("columns {column_ids:?}"));
    for (i, c) in layout.columns.iter().enumerate() {
        let peak = peaks.get(&c.strategy_id).copied().unwrap_or(0);
        r.check(c.peak == peak, "column peak", || format!("{}: peak {} expected {peak}", c.strategy_id, c.peak));
        r.check(close(c.x_end - c.x_start, peak as f64 * u, GEOMETRY_EPS), "column width", || {
            format!("{}: width {} for peak {peak}", c.strategy_id, c.x_end - c.x_start)
        });
        if let Some(next) = layout.columns.get(i + 1) {
            r.check(c.x_end <= next.x_start, "column ordering", || {
                format!("{} overlaps {}", c.strategy_id, next.strategy_id)
            });
            let catalog = corpus.strategy_catalog();
            let key = |id: &StrategyId| catalog.position(id).unwrap_or(usize::MAX);
            r.check((c.peak, key(&c.strategy_id)) < (next.peak, key(&next.strategy_id)), "column ordering", || {
                format!("{} (peak {}) before {} (peak {})", c.strategy_id, c.peak, next.strategy_id, next.peak)
            });
        }
    }

    // Unit counts against analytics, and containment in column and row.
    let usage = strategy_usage(corpus);
    let mut counts: HashMap<(&SessionId, &StrategyId, Side), usize> = HashMap::new();
    for unit in &layout.units {
        *counts.entry((&unit.session_id, &unit.strategy_id, unit.side)).or_default() += 1;
        let col = layout.columns.iter().find(|c| c.strategy_id == unit.strategy_id);
        let row = layout.rows.iter().find(|r| r.session_id == unit.session_id);
        let inside = match (col, row) {
            (Some(c), Some(row)) => {
                unit.rect.x >= c.x_start - GEOMETRY_EPS
                    && unit.rect.x + unit.rect.width <= c.x_end + GEOMETRY_EPS
                    && unit.rect.y >= row.y_start - GEOMETRY_EPS
                    && unit.rect.y + unit.rect.height <= row.y_end + GEOMETRY_EPS
            }
            _ => false,
        };
        r.check(inside, "unit placement", || format!("{}/{} outside its cell", unit.block_id, unit.strategy_id));
    }
    for (si, s) in usage.sessions.iter().enumerate() {
        for (ki, k) in usage.strategies.iter().enumerate() {
            for side in Side::BOTH {
                let got = counts.remove(&(s, k, side)).unwrap_or(0);
                let want = usage.count(si, ki, side);
                r.check(got == want, "unit count", || format!("{s}/{k}/{side:?}: {got} units for usage {want}"));
            }
        }
    }
    r.check(counts.is_empty(), "unit count", || format!("units outside the usage table: {counts:?}"));

    // Polylines and dashed links for multi-strategy blocks.
    let mut multi: BTreeMap<BlockId, (SessionId, Side, Vec<StrategyId>)> = BTreeMap::new();
    for b in corpus.blocks() {
        let set: BTreeSet<&StrategyId> = b.strategy_tags.iter().map(|t| &t.strategy_id).collect();
        if set.len() >= 2 {
            let mut ids: Vec<StrategyId> = set.into_iter().cloned().collect();
            ids.sort();
            multi.insert(b.id.clone(), (b.session_id.clone(), b.side, ids));
        }
    }
    let lines: BTreeSet<&BlockId> = layout.polylines.iter().map(|p| &p.block_id).collect();
    r.check(lines.len() == layout.polylines.len() && lines == multi.keys().collect(), "polylines", || {
        format!("polylines for {lines:?}, expected {:?}", multi.keys().collect::<Vec<_>>())
    });
    for line in &layout.polylines {
        let mut units: Vec<_> = layout.units.iter().filter(|u| u.block_id == line.block_id).collect();
        units.sort_by(|a, b| a.rect.x.total_cmp(&b.rect.x));
        let expected: Vec<_> = units.iter().map(|u| u.rect.centroid()).collect();
        r.check(line.points == expected, "polyline vertices", || format!("{}: {:?}", line.block_id, line.points));
    }
    let links: BTreeSet<&BlockId> = layout.dashed_links.iter().map(|l| &l.block_id).collect();
    r.check(links.len() == layout.dashed_links.len() && links == multi.keys().collect(), "dashed links", || {
        format!("links for {links:?}")
    });

    let mut groups: BTreeMap<(SessionId, Side, Vec<StrategyId>), usize> = BTreeMap::new();
    for (_, key) in multi {
        *groups.entry(key).or_default() += 1;
    }
    r.check(layout.icon_boxes.len() == groups.len(), "icon boxes", || {
        format!("{} boxes for {} groups", layout.icon_boxes.len(), groups.len())
    });
    for b in &layout.icon_boxes {
        let mut ids = b.strategy_ids.clone();
        ids.sort();
        let want = groups.get(&(b.session_id.clone(), b.side, ids)).copied().unwrap_or(0);
        let pointing = layout.dashed_links.iter().filter(|l| l.icon_box_id == b.id).count();
        r.check(b.multiplicity == want && pointing == want, "icon multiplicity", || {
            format!("{}: multiplicity {}, {pointing} links, expected {want}", b.id, b.multiplicity)
        });
    }
    r.0
}

/// Lays out `corpus` unfiltered and once per clash point, then runs every
/// process and strategy check.
pub fn verify_corpus(corpus: &DebateCorpus, config: &LayoutConfig) -> Vec<Violation> {
    let fail = |e: super::LayoutError| vec![Violation { invariant: "layout", detail: e.to_string() }];
    let mode = ChordColorMode::BicolorBySide;
    let layout = match super::layout_process(corpus, config, mode, None) {
        Ok(l) => l,
        Err(e) => return fail(e),
    };
    let mut out = verify_process(corpus, config, &layout, mode, None);
    for c in corpus.clash_points() {
        match super::layout_process(corpus, config, ChordColorMode::ClashColor, Some(&c.id)) {
            Ok(l) => out.extend(verify_process(corpus, config, &l, ChordColorMode::ClashColor, Some(&c.id))),
            Err(e) => out.extend(fail(e)),
        }
    }
    let usage = strategy_usage(corpus);
    let strategy = super::layout_strategy(
        corpus,
        &layout.circles,
        &usage,
        &crate::analytics::peak_usage(&usage),
        &crate::analytics::cooccurrence(corpus),
        &config.strategy,
    );
    out.extend(verify_strategy(corpus, &strategy, &layout.circles));
    out
}
