//! Named styles referenced by scene nodes.
//!
//! A node's `styleRef` is a space-separated list of style names, resolved
//! left to right with later names overriding earlier ones. Renderers decide
//! how `color` applies: as fill for areas and text, as stroke for lines.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{DebateCorpus, Side};

/// Categorical palette for clash points, indexed by `colorKey` modulo its
/// length.
pub const CLASH_PALETTE: [&str; 10] =
    ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"];

pub const HIGHLIGHTED: &str = "highlighted";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Style {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outline: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dash: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opacity: Option<f64>,
}

impl Style {
    fn color(c: &str) -> Self {
        Self { color: Some(c.to_string()), ..Default::default() }
    }

    fn outlined(mut self, outline: &str, width: f64) -> Self {
        self.outline = Some(outline.to_string());
        self.line_width = Some(width);
        self
    }

    fn width(mut self, w: f64) -> Self {
        self.line_width = Some(w);
        self
    }

    fn opacity(mut self, o: f64) -> Self {
        self.opacity = Some(o);
        self
    }

    /// Overlays the set fields of `other`.
    pub fn merge(&mut self, other: &Style) {
        if other.color.is_some() {
            self.color.clone_from(&other.color);
        }
        if other.outline.is_some() {
            self.outline.clone_from(&other.outline);
        }
        if other.line_width.is_some() {
            self.line_width = other.line_width;
        }
        if other.dash.is_some() {
            self.dash.clone_from(&other.dash);
        }
        if other.opacity.is_some() {
            self.opacity = other.opacity;
        }
    }
}

pub fn side_style(side: Side) -> String {
    format!("side-{}", side.as_str())
}

pub fn clash_style(color_key: usize) -> String {
    format!("clash-{color_key}")
}

pub fn clash_color(color_key: usize) -> &'static str {
    CLASH_PALETTE[color_key % CLASH_PALETTE.len()]
}

/// Style table for a corpus: the fixed entries plus one per clash color key.
pub fn style_table(corpus: &DebateCorpus) -> BTreeMap<String, Style> {
    let mut t: BTreeMap<String, Style> = BTreeMap::new();
    let mut put = |name: &str, s: Style| {
        t.insert(name.to_string(), s);
    };
    put("frame", Style::color("#ebebeb").outlined("#9a9a9a", 1.0));
    put(&side_style(Side::Affirmative), Style::color(Side::Affirmative.color()));
    put(&side_style(Side::Negative), Style::color(Side::Negative.color()));
    put("session-circle", Style::color("#ffffff").outlined("#000000", 1.0));
    put("session-label", Style::color("#333333"));
    put("session-spiral", Style::color("#8c8c8c").width(0.75));
    put("block-arc", Style::default().width(4.0));
    put("chord-arc", Style::color("#8c8c8c"));
    put("chord", Style::default().width(1.5).opacity(0.75));
    put("ring-section", Style::default());
    put("sector", Style::default().outlined("#ffffff", 0.5));
    put("sector-label", Style::color("#111111"));
    put("viewpoint-label", Style::color("#333333"));
    put("strategy-row", Style::color("#f7f7f7").outlined("#d0d0d0", 0.5));
    put("column-icon", Style::color("#333333"));
    put("unit", Style::default().outlined("#7f7f7f", 0.5));
    put("cooccurrence", Style::color("#555555").width(1.0));
    put(
        "dashed-link",
        Style { color: Some("#555555".into()), line_width: Some(0.75), dash: Some("3 2".into()), ..Default::default() },
    );
    put("icon-box", Style::color("#d9d9d9").outlined("#7f7f7f", 0.5));
    put("legend-text", Style::color("#222222"));
    put("legend-swatch", Style::default().outlined("#7f7f7f", 0.5));
    put("card", Style::default().outlined("#7f7f7f", 0.75));
    put("card-text", Style::color("#222222"));
    put("card-text-light", Style::color("#f2f2f2"));
    put("strategy-label", Style::color("#555555"));
    put(HIGHLIGHTED, Style::default().outlined("#ff7f0e", 2.0));
    for c in corpus.clash_points() {
        put(&clash_style(c.color_key), Style::color(clash_color(c.color_key)));
    }
    t
}

/// Resolves a `styleRef` against the table; unknown names are skipped.
pub fn resolve(table: &BTreeMap<String, Style>, style_ref: &str) -> Style {
    let mut out = Style::default();
    for name in style_ref.split_whitespace() {
        if let Some(s) = table.get(name) {
            out.merge(s);
        }
    }
    out
}
