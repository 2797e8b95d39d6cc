//! SVG output. Numbers are printed with exactly four decimals and `-0`
//! is normalized, so equal scenes give equal bytes.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use super::style::{resolve, Style, HIGHLIGHTED};
use super::{SceneGraph, SceneNode, Shape, TextAnchor};
use crate::layout::{Point, LINE_HEIGHT};

/// Angular step used when sampling spirals into polylines.
const SAMPLE_STEP: f64 = PI / 90.0;

pub fn fmt_num(x: f64) -> String {
    let s = format!("{x:.4}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|c| c == b'0' || c == b'.') => rest.to_string(),
        _ => s,
    }
}

fn pt(p: Point) -> String {
    format!("{} {}", fmt_num(p.x), fmt_num(p.y))
}

/// Points along `r(θ) = base + pitch·θ + offset` from `start` to `end`.
pub(crate) fn spiral_points(center: Point, base: f64, pitch: f64, start: f64, end: f64, offset: f64) -> Vec<Point> {
    let n = ((end - start).abs() / SAMPLE_STEP).ceil().max(1.0) as usize;
    (0..=n)
        .map(|i| {
            let t = start + (end - start) * i as f64 / n as f64;
            center.polar(base + pitch * t + offset, t)
        })
        .collect()
}

pub(crate) fn band_outline(shape: &Shape) -> Vec<Point> {
    match *shape {
        Shape::ArcBand { center, base_radius, pitch, start_angle, end_angle, inner_offset, outer_offset } => {
            let mut pts = spiral_points(center, base_radius, pitch, start_angle, end_angle, inner_offset);
            let mut outer = spiral_points(center, base_radius, pitch, start_angle, end_angle, outer_offset);
            outer.reverse();
            pts.extend(outer);
            pts
        }
        _ => Vec::new(),
    }
}

fn lerp(a: Point, b: Point, t: f64) -> Point {
    Point::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
}

/// The piece `[a, b]` of the quadratic Bézier `p0 p1 p2`, as its own
/// control polygon.
pub(crate) fn quad_piece(p0: Point, p1: Point, p2: Point, a: f64, b: f64) -> [Point; 3] {
    let at = |t: f64| lerp(lerp(p0, p1, t), lerp(p1, p2, t), t);
    // blossom B(a, b)
    let control = lerp(lerp(p0, p1, a), lerp(p1, p2, a), b);
    [at(a), control, at(b)]
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn icon_id(key: &str) -> String {
    if key.is_empty() {
        return "icon-generic".to_string();
    }
    let clean: String = key
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c.to_ascii_lowercase() } else { '-' })
        .collect();
    format!("icon-{clean}")
}

fn data_key(key: &str) -> String {
    let mut out = String::new();
    for c in key.chars() {
        if c.is_ascii_uppercase() {
            out.push('-');
            out.push(c.to_ascii_lowercase());
        } else if c.is_ascii_alphanumeric() || c == '-' {
            out.push(c);
        } else {
            out.push('-');
        }
    }
    out
}

enum Paint {
    Area,
    Line,
    Ink,
    None,
}

fn paint_of(shape: &Shape) -> Paint {
    match shape {
        Shape::ArcBand { .. } | Shape::Circle { .. } | Shape::Rect(_) => Paint::Area,
        Shape::SpiralStroke { .. } | Shape::Polyline { .. } | Shape::DashedLine { .. } | Shape::Chord { .. } => {
            Paint::Line
        }
        Shape::Text { .. } | Shape::Icon { .. } => Paint::Ink,
        Shape::Group => Paint::None,
    }
}

struct Renderer<'a> {
    scene: &'a SceneGraph,
    out: String,
}

impl Renderer<'_> {
    fn style(&self, node: &SceneNode) -> Style {
        let base: Vec<&str> = node.style_ref.split_whitespace().filter(|s| *s != HIGHLIGHTED).collect();
        let mut st = resolve(&self.scene.styles, &base.join(" "));
        if node.is_highlighted() {
            match paint_of(&node.shape) {
                Paint::Area => st.merge(self.scene.styles.get(HIGHLIGHTED).unwrap_or(&Style::default())),
                Paint::Line => st.line_width = Some(2.0 * st.line_width.unwrap_or(1.0)),
                Paint::Ink | Paint::None => {}
            }
        }
        st
    }

    fn paint_attrs(&self, node: &SceneNode) -> String {
        let st = self.style(node);
        let mut a = String::new();
        match paint_of(&node.shape) {
            Paint::Area => {
                let _ = write!(a, r#" fill="{}""#, escape(st.color.as_deref().unwrap_or("none")));
                if let Some(o) = &st.outline {
                    let _ = write!(
                        a,
                        r#" stroke="{}" stroke-width="{}""#,
                        escape(o),
                        fmt_num(st.line_width.unwrap_or(1.0))
                    );
                }
            }
            Paint::Line => {
                a.push_str(r#" fill="none""#);
                if !matches!(node.shape, Shape::Chord { .. }) {
                    let _ = write!(a, r#" stroke="{}""#, escape(st.color.as_deref().unwrap_or("#000000")));
                }
                let _ = write!(a, r#" stroke-width="{}""#, fmt_num(st.line_width.unwrap_or(1.0)));
                if let Some(d) = &st.dash {
                    let _ = write!(a, r#" stroke-dasharray="{}""#, escape(d));
                }
            }
            Paint::Ink => {
                let attr = if matches!(node.shape, Shape::Icon { .. }) { "color" } else { "fill" };
                let _ = write!(a, r#" {attr}="{}""#, escape(st.color.as_deref().unwrap_or("#000000")));
            }
            Paint::None => {}
        }
        if let Some(o) = st.opacity {
            let _ = write!(a, r#" opacity="{}""#, fmt_num(o));
        }
        a
    }

    fn data_attrs(node: &SceneNode) -> String {
        let mut a = format!(r#" data-kind="{}""#, node.kind());
        if let Some(id) = &node.id {
            let _ = write!(a, r#" data-id="{}""#, escape(id));
        }
        if !node.style_ref.is_empty() {
            let _ = write!(a, r#" class="{}""#, escape(&node.style_ref));
        }
        if let Some(h) = &node.interaction_handle {
            let _ = write!(
                a,
                r#" data-target-kind="{}" data-target-id="{}""#,
                h.target_kind.as_str(),
                escape(&h.target_id)
            );
        }
        for (k, v) in &node.data {
            let _ = write!(a, r#" data-{}="{}""#, data_key(k), escape(v));
        }
        a
    }

    fn line(&mut self, depth: usize, s: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str(s);
        self.out.push('\n');
    }

    /// The element for `node`'s own shape, with `attrs` appended.
    fn element(&self, node: &SceneNode, attrs: &str) -> Vec<String> {
        let paint = self.paint_attrs(node);
        match &node.shape {
            Shape::ArcBand { .. } => {
                let pts = band_outline(&node.shape);
                let d = path_data(&pts, true);
                vec![format!(r#"<path d="{d}"{paint}{attrs}/>"#)]
            }
            Shape::SpiralStroke { center, base_radius, pitch, start_angle, end_angle } => {
                let pts = spiral_points(*center, *base_radius, *pitch, *start_angle, *end_angle, 0.0);
                vec![format!(r#"<path d="{}"{paint}{attrs}/>"#, path_data(&pts, false))]
            }
            Shape::Chord { from, control, to, runs } => {
                let mut v = vec![format!("<g{paint}{attrs}>")];
                for r in runs {
                    let [a, c, b] = quad_piece(*from, *control, *to, r.t_start, r.t_end);
                    let st = resolve(&self.scene.styles, &r.style_ref);
                    v.push(format!(
                        r#"  <path d="M {} Q {} {}" stroke="{}"/>"#,
                        pt(a),
                        pt(c),
                        pt(b),
                        escape(st.color.as_deref().unwrap_or("#000000"))
                    ));
                }
                v.push("</g>".to_string());
                v
            }
            Shape::Circle { center, radius } => vec![format!(
                r#"<circle cx="{}" cy="{}" r="{}"{paint}{attrs}/>"#,
                fmt_num(center.x),
                fmt_num(center.y),
                fmt_num(*radius)
            )],
            Shape::Rect(r) => vec![format!(
                r#"<rect x="{}" y="{}" width="{}" height="{}"{paint}{attrs}/>"#,
                fmt_num(r.x),
                fmt_num(r.y),
                fmt_num(r.width),
                fmt_num(r.height)
            )],
            Shape::Polyline { points } => {
                let p: Vec<String> = points.iter().map(|p| format!("{},{}", fmt_num(p.x), fmt_num(p.y))).collect();
                vec![format!(r#"<polyline points="{}"{paint}{attrs}/>"#, p.join(" "))]
            }
            Shape::DashedLine { from, to } => vec![format!(
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"{paint}{attrs}/>"#,
                fmt_num(from.x),
                fmt_num(from.y),
                fmt_num(to.x),
                fmt_num(to.y)
            )],
            Shape::Text { position, font_size, lines, anchor, rotation } => {
                let anchor = match anchor {
                    TextAnchor::Start => "start",
                    TextAnchor::Middle => "middle",
                    TextAnchor::End => "end",
                };
                let mut head = format!(
                    r#"<text x="{}" y="{}" font-size="{}" text-anchor="{anchor}""#,
                    fmt_num(position.x),
                    fmt_num(position.y),
                    fmt_num(*font_size)
                );
                if *rotation != 0.0 {
                    let _ = write!(
                        head,
                        r#" transform="rotate({} {} {})""#,
                        fmt_num(*rotation),
                        fmt_num(position.x),
                        fmt_num(position.y)
                    );
                }
                let mut v = vec![format!("{head}{paint}{attrs}>")];
                for (i, y) in baselines(position.y, *font_size, lines.len()).into_iter().enumerate() {
                    v.push(format!(
                        r#"  <tspan x="{}" y="{}">{}</tspan>"#,
                        fmt_num(position.x),
                        fmt_num(y),
                        escape(&lines[i])
                    ));
                }
                v.push("</text>".to_string());
                v
            }
            Shape::Icon { position, size, icon_key } => vec![format!(
                r##"<use href="#{}" x="{}" y="{}" width="{}" height="{}"{paint}{attrs}/>"##,
                icon_id(icon_key),
                fmt_num(position.x),
                fmt_num(position.y),
                fmt_num(*size),
                fmt_num(*size)
            )],
            Shape::Group => vec![format!("<g{attrs}>"), "</g>".to_string()],
        }
    }

    fn node(&mut self, node: &SceneNode, depth: usize) {
        let attrs = Self::data_attrs(node);
        if matches!(node.shape, Shape::Group) {
            if node.children.is_empty() {
                self.line(depth, &format!("<g{attrs}/>"));
                return;
            }
            self.line(depth, &format!("<g{attrs}>"));
            for c in &node.children {
                self.node(c, depth + 1);
            }
            self.line(depth, "</g>");
            return;
        }
        if node.children.is_empty() {
            for l in self.element(node, &attrs) {
                self.line(depth, &l);
            }
            return;
        }
        self.line(depth, &format!("<g{attrs}>"));
        for l in self.element(node, "") {
            self.line(depth + 1, &l);
        }
        for c in &node.children {
            self.node(c, depth + 1);
        }
        self.line(depth, "</g>");
    }
}

/// Baselines of `n` lines centred vertically on `center_y`.
pub(crate) fn baselines(center_y: f64, font_size: f64, n: usize) -> Vec<f64> {
    let step = LINE_HEIGHT * font_size;
    let first = center_y - 0.5 * step * n.saturating_sub(1) as f64 + 0.35 * font_size;
    (0..n).map(|i| first + step * i as f64).collect()
}

fn path_data(pts: &[Point], close: bool) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        d.push_str(if i == 0 { "M " } else { " L " });
        d.push_str(&pt(*p));
    }
    if close {
        d.push_str(" Z");
    }
    d
}

/// Serializes a scene. Every node becomes one element (or one `<g>` when
/// it has children or several runs) tagged with `data-kind`, its classes
/// and its interaction handle as `data-target-kind` / `data-target-id`.
pub fn render_svg(scene: &SceneGraph) -> String {
    let vb = scene.view_box;
    let mut r = Renderer { scene, out: String::new() };
    r.line(
        0,
        &format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}" font-family="Helvetica, Arial, sans-serif">"#,
            fmt_num(vb.x),
            fmt_num(vb.y),
            fmt_num(vb.width),
            fmt_num(vb.height),
            fmt_num(vb.width),
            fmt_num(vb.height)
        ),
    );
    let icons: BTreeSet<String> = scene
        .nodes()
        .into_iter()
        .filter_map(|n| match &n.shape {
            Shape::Icon { icon_key, .. } => Some(icon_key.clone()),
            _ => None,
        })
        .collect();
    if !icons.is_empty() {
        r.line(1, "<defs>");
        for key in &icons {
            let letter: String = key.chars().next().map_or("?".to_string(), |c| c.to_uppercase().collect());
            r.line(
                2,
                &format!(
                    r#"<symbol id="{}" viewBox="0 0 10 10"><rect x="0.5" y="0.5" width="9" height="9" rx="2" fill="none" stroke="currentColor"/><text x="5" y="7.4" font-size="6.5" text-anchor="middle" fill="currentColor">{}</text></symbol>"#,
                    icon_id(key),
                    escape(&letter)
                ),
            );
        }
        r.line(1, "</defs>");
    }
    r.node(&scene.root, 1);
    r.line(0, "</svg>");
    r.out
}
