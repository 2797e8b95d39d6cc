use std::f64::consts::PI;

use super::content::{content_cards, ContentCard};
use super::style::{clash_style, side_style, style_table, HIGHLIGHTED};
use super::svg::{band_outline, spiral_points};
use super::{
    resolve_filter, ChordRunGeometry, FilterState, HighlightSet, SceneError, SceneGraph, SceneNode, Shape, TargetKind,
    TextAnchor, View,
};
use crate::analytics::{cooccurrence, peak_usage, strategy_usage};
use crate::layout::{
    estimate_text_width, layout_process, layout_strategy, wrap_text, LayoutConfig, Paint, Point, ProcessLayout, Rect,
    StrategyLayout, LINE_HEIGHT,
};
use crate::model::{DebateCorpus, Side};

/// Horizontal gap between views.
const VIEW_GAP: f64 = 40.0;
/// Margin between the frame and the content.
const FRAME_MARGIN: f64 = 20.0;
const LEGEND_WIDTH: f64 = 180.0;
const LEGEND_ROW: f64 = 16.0;
const LEGEND_FONT: f64 = 9.0;
const SWATCH: f64 = 10.0;
const CHORD_ARC_WIDTH: f64 = 4.0;
const CARD_WIDTH: f64 = 300.0;
const CARD_PAD: f64 = 6.0;
const CARD_GAP: f64 = 8.0;
const CARD_HEADER_FONT: f64 = 9.0;
const CARD_BODY_FONT: f64 = 8.0;
const CARD_LABEL_FONT: f64 = 7.0;
/// Share of the card's inner width given to wrapped text, leaving room for
/// fonts wider than the width estimate.
const CARD_WRAP: f64 = 0.88;

fn styled(base: &str, highlighted: bool) -> String {
    if highlighted {
        format!("{base} {HIGHLIGHTED}")
    } else {
        base.to_string()
    }
}

fn text(position: Point, font_size: f64, lines: Vec<String>, anchor: TextAnchor, rotation: f64) -> Shape {
    Shape::Text { position, font_size, lines, anchor, rotation }
}

/// Runs both layouts and assembles the full scene.
///
/// Pure in `(corpus, config, filter)`. A corpus without sessions yields
/// empty view subtrees around the frame and legend.
pub fn build_scene(
    corpus: &DebateCorpus,
    config: &LayoutConfig,
    filter: &FilterState,
) -> Result<SceneGraph, SceneError> {
    let highlight = resolve_filter(corpus, filter)?;
    config.validate()?;
    let (process, strategy) = if corpus.sessions().is_empty() {
        (None, None)
    } else {
        let p = layout_process(corpus, config, filter.effective_color_mode(), filter.clash_point.as_ref())?;
        let usage = strategy_usage(corpus);
        let s =
            layout_strategy(corpus, &p.circles, &usage, &peak_usage(&usage), &cooccurrence(corpus), &config.strategy);
        let dx = p.origin.x + p.outer_radius() + VIEW_GAP;
        (Some(p), Some(s.translated(dx)))
    };

    let cards = content_cards(corpus);
    let session = SceneNode::group("session")
        .with_children(process.as_ref().map_or_else(Vec::new, |p| session_nodes(corpus, p, &highlight)));
    let process_node = SceneNode::group("process")
        .with_children(process.as_ref().map_or_else(Vec::new, |p| process_nodes(corpus, p, config, &highlight)));
    let strategy_node = SceneNode::group("strategy")
        .with_children(strategy.as_ref().map_or_else(Vec::new, |s| strategy_nodes(corpus, s, config, &highlight)));

    let upper = bounds([&session, &process_node, &strategy_node]);
    let content_origin = match (&strategy, upper) {
        (Some(s), Some((min, _))) => Point::new(s.width.max(min.x) + VIEW_GAP, min.y),
        (None, Some((min, max))) => Point::new(max.x + VIEW_GAP, min.y),
        (_, None) => Point::new(0.0, 0.0),
    };
    let content = SceneNode::group("content").with_children(card_nodes(&cards, content_origin, &highlight));

    let drawn = bounds([&session, &process_node, &strategy_node, &content]);
    let legend_origin =
        drawn.map_or(Point::new(0.0, 0.0), |(min, _)| Point::new(min.x - LEGEND_WIDTH - VIEW_GAP, min.y));
    let legend = legend_node(corpus, legend_origin, &highlight);

    let (min, max) = bounds([&legend, &session, &process_node, &strategy_node, &content]).expect("legend always draws");
    let view_box = Rect {
        x: min.x - FRAME_MARGIN,
        y: min.y - FRAME_MARGIN,
        width: max.x - min.x + 2.0 * FRAME_MARGIN,
        height: max.y - min.y + 2.0 * FRAME_MARGIN,
    };
    let mut frame = SceneNode::new(Shape::Rect(view_box), "frame");
    frame.id = Some("frame".to_string());

    let root =
        SceneNode::group("scene").with_children(vec![frame, legend, session, process_node, strategy_node, content]);
    let warnings = process.as_ref().map(|p| p.warnings.clone()).unwrap_or_default();
    Ok(SceneGraph {
        view: View::All,
        view_box,
        filter: filter.clone(),
        highlight,
        styles: style_table(corpus),
        root,
        cards,
        process,
        strategy,
        warnings,
    })
}

fn session_nodes(corpus: &DebateCorpus, p: &ProcessLayout, hl: &HighlightSet) -> Vec<SceneNode> {
    p.circles
        .iter()
        .map(|c| {
            let on = hl.contains_session(&c.session_id);
            let mut children = Vec::new();
            if let Some(split) = &c.side_split {
                let neg = split.get(Side::Negative);
                if neg > 0.0 {
                    children.push(
                        SceneNode::new(
                            Shape::ArcBand {
                                center: c.center,
                                base_radius: 0.0,
                                pitch: 0.0,
                                start_angle: 0.0,
                                end_angle: 2.0 * PI * neg,
                                inner_offset: 0.0,
                                outer_offset: c.radius,
                            },
                            side_style(Side::Negative),
                        )
                        .with_handle(TargetKind::Session, &c.session_id)
                        .with_data("share", format!("{neg:.4}")),
                    );
                }
            }
            let index = corpus.session(&c.session_id).map_or(0, |s| s.index);
            children.push(
                SceneNode::new(
                    text(
                        Point::new(c.center.x - c.radius - 4.0, c.center.y),
                        LEGEND_FONT,
                        vec![index.to_string()],
                        TextAnchor::End,
                        0.0,
                    ),
                    "session-label",
                )
                .with_handle(TargetKind::Session, &c.session_id),
            );
            SceneNode::new(Shape::Circle { center: c.center, radius: c.radius }, styled("session-circle", on))
                .with_handle(TargetKind::Session, &c.session_id)
                .with_children(children)
        })
        .collect()
}

/// Rotation in degrees that keeps text tangent to a circle at `angle`
/// while never upside down.
fn tangent_rotation(angle: f64) -> f64 {
    let deg = angle.rem_euclid(2.0 * PI).to_degrees();
    if deg > 90.0 && deg < 270.0 {
        deg - 180.0
    } else if deg >= 270.0 {
        deg - 360.0
    } else {
        deg
    }
}

fn process_nodes(corpus: &DebateCorpus, p: &ProcessLayout, config: &LayoutConfig, hl: &HighlightSet) -> Vec<SceneNode> {
    let o = p.origin;
    let mut out = Vec::new();
    for a in &p.chord_arcs {
        out.push(
            SceneNode::new(
                Shape::ArcBand {
                    center: o,
                    base_radius: p.chord_circle_radius,
                    pitch: 0.0,
                    start_angle: a.start_angle,
                    end_angle: a.end_angle,
                    inner_offset: -CHORD_ARC_WIDTH,
                    outer_offset: 0.0,
                },
                styled("chord-arc", hl.contains_session(&a.session_id)),
            )
            .with_handle(TargetKind::Session, &a.session_id),
        );
    }
    let rc = p.chord_circle_radius - CHORD_ARC_WIDTH;
    for ch in &p.chords {
        let runs = ch
            .runs
            .iter()
            .map(|r| ChordRunGeometry {
                t_start: r.t_start,
                t_end: r.t_end,
                style_ref: match &r.paint {
                    Paint::Side { side } => side_style(*side),
                    Paint::Clash { color_key, .. } => clash_style(*color_key),
                },
            })
            .collect();
        let on = hl.contains_clash_point(&ch.clash_point_id)
            || hl.contains_block(&ch.from_block_id)
            || hl.contains_block(&ch.to_block_id);
        out.push(
            SceneNode::new(
                Shape::Chord { from: o.polar(rc, ch.from_angle), control: o, to: o.polar(rc, ch.to_angle), runs },
                styled("chord", on),
            )
            .with_handle(TargetKind::ClashPoint, &ch.clash_point_id)
            .with_data("disagreement", &ch.disagreement_id)
            .with_data("fromBlock", &ch.from_block_id)
            .with_data("toBlock", &ch.to_block_id),
        );
    }
    for seg in &p.segments {
        let base = seg.start_radius - seg.pitch * seg.start_angle;
        let blocks = seg
            .block_sub_arcs
            .iter()
            .map(|b| {
                let style = format!("block-arc {}", side_style(b.side));
                SceneNode::new(
                    Shape::SpiralStroke {
                        center: o,
                        base_radius: base,
                        pitch: seg.pitch,
                        start_angle: seg.start_angle + b.start_angle,
                        end_angle: seg.start_angle + b.end_angle,
                    },
                    styled(&style, hl.contains_block(&b.block_id)),
                )
                .with_handle(TargetKind::Block, &b.block_id)
            })
            .collect();
        out.push(
            SceneNode::new(
                Shape::SpiralStroke {
                    center: o,
                    base_radius: base,
                    pitch: seg.pitch,
                    start_angle: seg.start_angle,
                    end_angle: seg.start_angle + seg.central_angle,
                },
                styled("session-spiral", hl.contains_session(&seg.session_id)),
            )
            .with_handle(TargetKind::Session, &seg.session_id)
            .with_children(blocks),
        );
    }
    for r in &p.ring_sections {
        let Some(seg) = p.segments.iter().find(|s| s.session_id == r.session_id) else { continue };
        out.push(
            SceneNode::new(
                Shape::ArcBand {
                    center: o,
                    base_radius: seg.start_radius - seg.pitch * seg.start_angle,
                    pitch: seg.pitch,
                    start_angle: seg.start_angle + r.start_angle,
                    end_angle: seg.start_angle + r.end_angle,
                    inner_offset: r.inner_offset,
                    outer_offset: r.outer_offset,
                },
                styled(
                    &format!("ring-section {}", clash_style(r.color_key)),
                    hl.contains_clash_point(&r.clash_point_id),
                ),
            )
            .with_handle(TargetKind::ClashPoint, &r.clash_point_id)
            .with_data("session", &r.session_id)
            .with_data("share", format!("{:.4}", r.share)),
        );
    }
    let catalog = corpus.strategy_catalog();
    for s in &p.sector_blocks {
        let Some(seg) = p.segments.iter().find(|x| x.session_id == s.session_id) else { continue };
        let (a0, a1) = (seg.start_angle + s.start_angle, seg.start_angle + s.end_angle);
        let mid = 0.5 * (a0 + a1);
        let h = s.outer_offset - s.inner_offset;
        let r_mid = seg.radius_at(0.5 * (s.start_angle + s.end_angle));
        let rot = tangent_rotation(mid);
        let mut children = vec![
            SceneNode::new(
                text(
                    o.polar(r_mid + s.inner_offset + 0.7 * h, mid),
                    s.label.font_size,
                    s.label.lines.clone(),
                    TextAnchor::Middle,
                    rot,
                ),
                "sector-label",
            )
            .with_handle(TargetKind::Disagreement, &s.disagreement_id),
            SceneNode::new(
                text(
                    o.polar(r_mid + s.inner_offset + 0.2 * h, mid),
                    s.viewpoints.font_size,
                    s.viewpoints.lines.clone(),
                    TextAnchor::Middle,
                    rot,
                ),
                "viewpoint-label",
            )
            .with_handle(TargetKind::Disagreement, &s.disagreement_id),
        ];
        let n = s.strategy_ids.len();
        if n > 0 {
            let inner_r = seg.radius_at(s.start_angle) + s.inner_offset;
            let arc = (s.end_angle - s.start_angle) * inner_r.max(0.0);
            let size = config.strategy.icon_size.min(0.3 * h).min(0.8 * arc / n as f64).max(0.0);
            for (i, id) in s.strategy_ids.iter().enumerate() {
                let t = s.start_angle + (s.end_angle - s.start_angle) * (i as f64 + 0.5) / n as f64;
                let c = o.polar(seg.radius_at(t) + s.inner_offset + 0.5 * size, seg.start_angle + t);
                let icon_key = catalog.get(id).map(|e| e.icon_key.clone()).unwrap_or_default();
                children.push(
                    SceneNode::new(
                        Shape::Icon { position: Point::new(c.x - 0.5 * size, c.y - 0.5 * size), size, icon_key },
                        "column-icon",
                    )
                    .with_handle(TargetKind::Strategy, id),
                );
            }
        }
        out.push(
            SceneNode::new(
                Shape::ArcBand {
                    center: o,
                    base_radius: seg.start_radius - seg.pitch * seg.start_angle,
                    pitch: seg.pitch,
                    start_angle: a0,
                    end_angle: a1,
                    inner_offset: s.inner_offset,
                    outer_offset: s.outer_offset,
                },
                styled(&format!("sector {}", clash_style(s.color_key)), hl.contains_clash_point(&s.clash_point_id)),
            )
            .with_handle(TargetKind::Disagreement, &s.disagreement_id)
            .with_data("session", &s.session_id)
            .with_data("clashPoint", &s.clash_point_id)
            .with_data("blocks", s.block_count)
            .with_children(children),
        );
    }
    out
}

fn strategy_nodes(
    corpus: &DebateCorpus,
    s: &StrategyLayout,
    config: &LayoutConfig,
    hl: &HighlightSet,
) -> Vec<SceneNode> {
    let mut out = Vec::new();
    for r in &s.rows {
        out.push(
            SceneNode::new(
                Shape::Rect(Rect {
                    x: s.x_origin,
                    y: r.y_start,
                    width: s.width - s.x_origin,
                    height: r.y_end - r.y_start,
                }),
                styled("strategy-row", hl.contains_session(&r.session_id)),
            )
            .with_handle(TargetKind::Session, &r.session_id),
        );
    }
    let top = s.rows.iter().map(|r| r.y_start).fold(f64::INFINITY, f64::min);
    let icon = config.strategy.icon_size;
    for c in &s.columns {
        out.push(
            SceneNode::new(
                Shape::Icon {
                    position: Point::new(0.5 * (c.x_start + c.x_end) - 0.5 * icon, top - icon - 4.0),
                    size: icon,
                    icon_key: c.icon_key.clone(),
                },
                "column-icon",
            )
            .with_handle(TargetKind::Strategy, &c.strategy_id)
            .with_data("peak", c.peak),
        );
    }
    for u in &s.units {
        out.push(
            SceneNode::new(
                Shape::Rect(u.rect),
                styled(&format!("unit {}", side_style(u.side)), hl.contains_block(&u.block_id)),
            )
            .with_handle(TargetKind::Block, &u.block_id)
            .with_data("strategy", &u.strategy_id),
        );
    }
    for l in &s.polylines {
        out.push(
            SceneNode::new(
                Shape::Polyline { points: l.points.clone() },
                styled("cooccurrence", hl.contains_block(&l.block_id)),
            )
            .with_handle(TargetKind::Block, &l.block_id),
        );
    }
    for l in &s.dashed_links {
        out.push(
            SceneNode::new(
                Shape::DashedLine { from: l.from, to: l.to },
                styled("dashed-link", hl.contains_block(&l.block_id)),
            )
            .with_handle(TargetKind::Block, &l.block_id)
            .with_data("iconBox", &l.icon_box_id),
        );
    }
    let catalog = corpus.strategy_catalog();
    for b in &s.icon_boxes {
        let size = b.rect.height;
        let icons = b
            .strategy_ids
            .iter()
            .enumerate()
            .map(|(i, id)| {
                SceneNode::new(
                    Shape::Icon {
                        position: Point::new(b.rect.x + 1.0 + i as f64 * config.strategy.icon_size, b.rect.y),
                        size,
                        icon_key: catalog.get(id).map(|e| e.icon_key.clone()).unwrap_or_default(),
                    },
                    side_style(b.side),
                )
                .with_handle(TargetKind::Strategy, id)
            })
            .collect();
        let mut node = SceneNode::new(Shape::Rect(b.rect), "icon-box")
            .with_data("session", &b.session_id)
            .with_data("multiplicity", b.multiplicity)
            .with_children(icons);
        node.id = Some(b.id.clone());
        out.push(node);
    }
    out
}

fn legend_node(corpus: &DebateCorpus, origin: Point, hl: &HighlightSet) -> SceneNode {
    let mut rows = Vec::new();
    let mut y = origin.y;
    let mut row = |swatch: SceneNode, label: String, handle: Option<(TargetKind, String)>, y: &mut f64| {
        let mut t = SceneNode::new(
            text(
                Point::new(origin.x + SWATCH + 6.0, *y + 0.5 * SWATCH),
                LEGEND_FONT,
                vec![label],
                TextAnchor::Start,
                0.0,
            ),
            "legend-text",
        );
        if let Some((k, id)) = handle {
            t = t.with_handle(k, id);
        }
        rows.push(swatch);
        rows.push(t);
        *y += LEGEND_ROW;
    };
    let swatch = |y: f64| Rect { x: origin.x, y, width: SWATCH, height: SWATCH };
    for side in Side::BOTH {
        let name = match side {
            Side::Affirmative => "Affirmative",
            Side::Negative => "Negative",
        };
        row(
            SceneNode::new(Shape::Rect(swatch(y)), format!("legend-swatch {}", side_style(side))),
            name.into(),
            None,
            &mut y,
        );
    }
    for c in corpus.clash_points() {
        let node = SceneNode::new(
            Shape::Rect(swatch(y)),
            styled(&format!("legend-swatch {}", clash_style(c.color_key)), hl.contains_clash_point(&c.id)),
        )
        .with_handle(TargetKind::ClashPoint, &c.id);
        row(node, c.label.clone(), Some((TargetKind::ClashPoint, c.id.to_string())), &mut y);
    }
    for e in &corpus.strategy_catalog().entries {
        let node = SceneNode::new(
            Shape::Icon { position: Point::new(origin.x, y), size: SWATCH, icon_key: e.icon_key.clone() },
            "column-icon",
        )
        .with_handle(TargetKind::Strategy, &e.id);
        row(node, e.name.clone(), Some((TargetKind::Strategy, e.id.to_string())), &mut y);
    }
    SceneNode::group("legend").with_children(rows)
}

fn card_nodes(cards: &[ContentCard], origin: Point, hl: &HighlightSet) -> Vec<SceneNode> {
    let mut out = Vec::with_capacity(cards.len());
    let mut y = origin.y;
    let x = origin.x;
    let inner = CARD_WRAP * (CARD_WIDTH - 2.0 * CARD_PAD);
    for card in cards {
        let ink = if card.side == Side::Negative { "card-text-light" } else { "card-text" };
        let mut children = Vec::new();
        let mut cy = y + CARD_PAD;
        let header_y = cy + 0.5 * LINE_HEIGHT * CARD_HEADER_FONT;
        children.push(
            SceneNode::new(
                text(
                    Point::new(x + CARD_PAD, header_y),
                    CARD_HEADER_FONT,
                    vec![card.block_id.to_string()],
                    TextAnchor::Start,
                    0.0,
                ),
                ink,
            )
            .with_handle(TargetKind::Block, &card.block_id),
        );
        children.push(SceneNode::new(
            text(
                Point::new(x + CARD_WIDTH - CARD_PAD, header_y),
                CARD_HEADER_FONT,
                vec![card.debater_label.clone()],
                TextAnchor::End,
                0.0,
            ),
            ink,
        ));
        cy += LINE_HEIGHT * CARD_HEADER_FONT + 2.0;
        let body_line = LINE_HEIGHT * CARD_BODY_FONT;
        for c in &card.clash_points {
            let s = 0.8 * CARD_BODY_FONT;
            children.push(
                SceneNode::new(
                    Shape::Rect(Rect { x: x + CARD_PAD, y: cy + 0.5 * (body_line - s), width: s, height: s }),
                    format!("legend-swatch {}", clash_style(c.color_key)),
                )
                .with_handle(TargetKind::ClashPoint, &c.id),
            );
            children.push(
                SceneNode::new(
                    text(
                        Point::new(x + CARD_PAD + s + 4.0, cy + 0.5 * body_line),
                        CARD_BODY_FONT,
                        vec![c.label.clone()],
                        TextAnchor::Start,
                        0.0,
                    ),
                    ink,
                )
                .with_handle(TargetKind::ClashPoint, &c.id),
            );
            cy += body_line;
        }
        for v in &card.viewpoints {
            let lines = wrap_text(&format!("{}: {}", v.label, v.viewpoint), CARD_BODY_FONT, inner);
            let h = lines.len() as f64 * body_line;
            children.push(
                SceneNode::new(
                    text(Point::new(x + CARD_PAD, cy + 0.5 * h), CARD_BODY_FONT, lines, TextAnchor::Start, 0.0),
                    ink,
                )
                .with_handle(TargetKind::Disagreement, &v.disagreement_id),
            );
            cy += h;
        }
        for seg in &card.segments {
            cy += 2.0;
            let lines = wrap_text(&seg.text, CARD_BODY_FONT, inner);
            let h = lines.len() as f64 * body_line;
            children.push(
                SceneNode::new(
                    text(Point::new(x + CARD_PAD, cy + 0.5 * h), CARD_BODY_FONT, lines, TextAnchor::Start, 0.0),
                    ink,
                )
                .with_handle(TargetKind::Block, &card.block_id)
                .with_data("sentences", format!("{}-{}", seg.sentence_range.start, seg.sentence_range.end)),
            );
            cy += h;
            let label_line = LINE_HEIGHT * CARD_LABEL_FONT;
            for st in &seg.strategies {
                children.push(
                    SceneNode::new(
                        Shape::Icon {
                            position: Point::new(x + CARD_PAD, cy + 0.5 * (label_line - CARD_LABEL_FONT)),
                            size: CARD_LABEL_FONT,
                            icon_key: st.icon_key.clone(),
                        },
                        ink,
                    )
                    .with_handle(TargetKind::Strategy, &st.id),
                );
                children.push(
                    SceneNode::new(
                        text(
                            Point::new(x + CARD_PAD + CARD_LABEL_FONT + 4.0, cy + 0.5 * label_line),
                            CARD_LABEL_FONT,
                            vec![st.name.clone()],
                            TextAnchor::Start,
                            0.0,
                        ),
                        ink,
                    )
                    .with_handle(TargetKind::Strategy, &st.id),
                );
                cy += label_line;
            }
        }
        let height = cy + CARD_PAD - y;
        let on = hl.contains_block(&card.block_id);
        out.push(
            SceneNode::new(
                Shape::Rect(Rect { x, y, width: CARD_WIDTH, height }),
                styled(&format!("card {}", side_style(card.side)), on),
            )
            .with_handle(TargetKind::Block, &card.block_id)
            .with_data("session", &card.session_id)
            .with_data("debater", &card.debater_id)
            .with_children(children),
        );
        y += height + CARD_GAP;
    }
    out
}

/// Axis-aligned bounds of everything drawn under `roots`.
fn bounds<'a>(roots: impl IntoIterator<Item = &'a SceneNode>) -> Option<(Point, Point)> {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut any = false;
    let mut add = |p: Point| {
        any = true;
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    };
    for root in roots {
        for n in root.walk() {
            match &n.shape {
                Shape::ArcBand { .. } => band_outline(&n.shape).into_iter().for_each(&mut add),
                Shape::SpiralStroke { center, base_radius, pitch, start_angle, end_angle } => {
                    spiral_points(*center, *base_radius, *pitch, *start_angle, *end_angle, 0.0)
                        .into_iter()
                        .for_each(&mut add)
                }
                Shape::Chord { from, control, to, .. } => [*from, *control, *to].into_iter().for_each(&mut add),
                Shape::Circle { center, radius } => {
                    add(Point::new(center.x - radius, center.y - radius));
                    add(Point::new(center.x + radius, center.y + radius));
                }
                Shape::Rect(r) => {
                    add(Point::new(r.x, r.y));
                    add(Point::new(r.x + r.width, r.y + r.height));
                }
                Shape::Polyline { points } => points.iter().copied().for_each(&mut add),
                Shape::DashedLine { from, to } => [*from, *to].into_iter().for_each(&mut add),
                Shape::Text { position, font_size, lines, anchor, .. } => {
                    let w = lines.iter().map(|l| estimate_text_width(l, *font_size)).fold(0.0, f64::max);
                    let h = 0.5 * LINE_HEIGHT * font_size * lines.len().max(1) as f64;
                    let (x0, x1) = match anchor {
                        TextAnchor::Start => (position.x, position.x + w),
                        TextAnchor::Middle => (position.x - 0.5 * w, position.x + 0.5 * w),
                        TextAnchor::End => (position.x - w, position.x),
                    };
                    add(Point::new(x0, position.y - h));
                    add(Point::new(x1, position.y + h));
                }
                Shape::Icon { position, size, .. } => {
                    add(*position);
                    add(Point::new(position.x + size, position.y + size));
                }
                Shape::Group => {}
            }
        }
    }
    any.then_some((min, max))
}
