//! Renderer-agnostic scene graph for the four coordinated views.
//!
//! [`build_scene`] runs both layouts and turns them into a tree of drawing
//! nodes: a frame, a legend, then the session, process, strategy and
//! content subtrees. Nodes carry geometry, a style reference and an
//! optional interaction handle naming the corpus entity they stand for.
//! [`render_svg`] turns a scene into byte-stable SVG.

mod build;
mod content;
mod style;
mod svg;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::{
    ChordColorMode, LayoutConfig, LayoutError, LayoutWarning, Point, ProcessLayout, Rect, StrategyLayout,
};
use crate::model::{BlockId, ClashPointId, DebateCorpus, SessionId, TurnId};

pub use build::build_scene;
pub use content::{
    block_context, content_card, content_cards, BlockContext, CardClashPoint, CardStrategy, CardViewpoint, ContentCard,
    TextSegment,
};
pub use style::{clash_color, resolve, style_table, Style, CLASH_PALETTE, HIGHLIGHTED};
pub use svg::{fmt_num, render_svg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TargetKind {
    Session,
    Turn,
    Block,
    ClashPoint,
    Disagreement,
    Strategy,
}

impl TargetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetKind::Session => "session",
            TargetKind::Turn => "turn",
            TargetKind::Block => "block",
            TargetKind::ClashPoint => "clashPoint",
            TargetKind::Disagreement => "disagreement",
            TargetKind::Strategy => "strategy",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The corpus entity a node stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InteractionHandle {
    pub target_kind: TargetKind,
    pub target_id: String,
}

impl InteractionHandle {
    pub fn new(target_kind: TargetKind, target_id: impl fmt::Display) -> Self {
        Self { target_kind, target_id: target_id.to_string() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TextAnchor {
    #[default]
    Start,
    Middle,
    End,
}

/// A colored stretch of a chord in curve parameter `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChordRunGeometry {
    pub t_start: f64,
    pub t_end: f64,
    pub style_ref: String,
}

/// Node geometry, tagged by node kind.
///
/// Bands and strokes follow spirals `r(θ) = baseRadius + pitch·θ` around
/// `center`, with θ clockwise from the upward axis. Bands span the radial
/// offsets `[innerOffset, outerOffset]` above that curve. Chords are
/// quadratic Béziers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "geometry", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Shape {
    ArcBand {
        center: Point,
        base_radius: f64,
        pitch: f64,
        start_angle: f64,
        end_angle: f64,
        inner_offset: f64,
        outer_offset: f64,
    },
    SpiralStroke {
        center: Point,
        base_radius: f64,
        pitch: f64,
        start_angle: f64,
        end_angle: f64,
    },
    Chord {
        from: Point,
        control: Point,
        to: Point,
        runs: Vec<ChordRunGeometry>,
    },
    Circle {
        center: Point,
        radius: f64,
    },
    Rect(Rect),
    Polyline {
        points: Vec<Point>,
    },
    DashedLine {
        from: Point,
        to: Point,
    },
    Text {
        position: Point,
        font_size: f64,
        lines: Vec<String>,
        anchor: TextAnchor,
        /// Clockwise rotation in degrees about `position`.
        rotation: f64,
    },
    Icon {
        position: Point,
        size: f64,
        icon_key: String,
    },
    Group,
}

impl Shape {
    pub fn kind(&self) -> &'static str {
        match self {
            Shape::ArcBand { .. } => "arcBand",
            Shape::SpiralStroke { .. } => "spiralStroke",
            Shape::Chord { .. } => "chord",
            Shape::Circle { .. } => "circle",
            Shape::Rect(_) => "rect",
            Shape::Polyline { .. } => "polyline",
            Shape::DashedLine { .. } => "dashedLine",
            Shape::Text { .. } => "text",
            Shape::Icon { .. } => "icon",
            Shape::Group => "group",
        }
    }

    /// Every number in the geometry.
    fn numbers(&self) -> Vec<f64> {
        let p = |p: &Point| [p.x, p.y];
        match self {
            Shape::ArcBand { center, base_radius, pitch, start_angle, end_angle, inner_offset, outer_offset } => {
                let mut v = p(center).to_vec();
                v.extend([*base_radius, *pitch, *start_angle, *end_angle, *inner_offset, *outer_offset]);
                v
            }
            Shape::SpiralStroke { center, base_radius, pitch, start_angle, end_angle } => {
                let mut v = p(center).to_vec();
                v.extend([*base_radius, *pitch, *start_angle, *end_angle]);
                v
            }
            Shape::Chord { from, control, to, runs } => {
                let mut v: Vec<f64> = [from, control, to].into_iter().flat_map(p).collect();
                v.extend(runs.iter().flat_map(|r| [r.t_start, r.t_end]));
                v
            }
            Shape::Circle { center, radius } => vec![center.x, center.y, *radius],
            Shape::Rect(r) => vec![r.x, r.y, r.width, r.height],
            Shape::Polyline { points } => points.iter().flat_map(p).collect(),
            Shape::DashedLine { from, to } => [from, to].into_iter().flat_map(p).collect(),
            Shape::Text { position, font_size, rotation, .. } => vec![position.x, position.y, *font_size, *rotation],
            Shape::Icon { position, size, .. } => vec![position.x, position.y, *size],
            Shape::Group => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SceneNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(flatten)]
    pub shape: Shape,
    pub style_ref: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction_handle: Option<InteractionHandle>,
    /// Extra tooltip fields, emitted as `data-*` attributes in SVG.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<SceneNode>,
}

impl SceneNode {
    pub fn new(shape: Shape, style_ref: impl Into<String>) -> Self {
        Self {
            id: None,
            shape,
            style_ref: style_ref.into(),
            interaction_handle: None,
            data: BTreeMap::new(),
            children: Vec::new(),
        }
    }

    pub fn group(id: &str) -> Self {
        let mut n = Self::new(Shape::Group, "");
        n.id = Some(id.to_string());
        n
    }

    pub fn with_handle(mut self, kind: TargetKind, id: impl fmt::Display) -> Self {
        self.interaction_handle = Some(InteractionHandle::new(kind, id));
        self
    }

    pub fn with_data(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.data.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_children(mut self, children: Vec<SceneNode>) -> Self {
        self.children = children;
        self
    }

    pub fn kind(&self) -> &'static str {
        self.shape.kind()
    }

    pub fn has_style(&self, name: &str) -> bool {
        self.style_ref.split_whitespace().any(|s| s == name)
    }

    pub fn is_highlighted(&self) -> bool {
        self.has_style(HIGHLIGHTED)
    }

    /// Pre-order traversal including `self`.
    pub fn walk(&self) -> Vec<&SceneNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children.iter().rev());
        }
        out
    }

    pub fn find(&self, id: &str) -> Option<&SceneNode> {
        self.walk().into_iter().find(|n| n.id.as_deref() == Some(id))
    }
}

/// Current selections. At most one id per kind; a clash-point selection
/// also filters chords to that clash point and colors them by it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FilterState {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<SessionId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turn: Option<TurnId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<BlockId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clash_point: Option<ClashPointId>,
    #[serde(default)]
    pub chord_color_mode: ChordColorMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterParseError {
    #[error("unknown filter key {0:?}")]
    UnknownKey(String),
    #[error("filter key {0:?} given more than once")]
    Duplicate(String),
    #[error("filter {key:?} has an empty value")]
    EmptyValue { key: String },
    #[error("unknown chordColorMode {0:?}; expected bicolorBySide, monoBySide or clashColor")]
    BadColorMode(String),
    #[error("malformed filter {0:?}; expected key=value")]
    Malformed(String),
}

impl FilterState {
    /// Builds a filter from `key=value` pairs such as URL query parameters.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Result<Self, FilterParseError> {
        let mut f = FilterState::default();
        let mut seen = BTreeSet::new();
        for (k, v) in pairs {
            let (k, v) = (k.as_ref(), v.as_ref().trim());
            if !seen.insert(k.to_string()) {
                return Err(FilterParseError::Duplicate(k.to_string()));
            }
            if v.is_empty() {
                return Err(FilterParseError::EmptyValue { key: k.to_string() });
            }
            match k {
                "session" => f.session = Some(v.into()),
                "turn" => f.turn = Some(v.into()),
                "block" => f.block = Some(v.into()),
                "clashPoint" => f.clash_point = Some(v.into()),
                "chordColorMode" => {
                    f.chord_color_mode = serde_json::from_value(serde_json::Value::String(v.to_string()))
                        .map_err(|_| FilterParseError::BadColorMode(v.to_string()))?
                }
                other => return Err(FilterParseError::UnknownKey(other.to_string())),
            }
        }
        Ok(f)
    }

    /// Parses `key=value` strings as given on the command line.
    pub fn parse_args<S: AsRef<str>>(args: &[S]) -> Result<Self, FilterParseError> {
        let pairs = args
            .iter()
            .map(|a| a.as_ref().split_once('=').ok_or_else(|| FilterParseError::Malformed(a.as_ref().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_pairs(pairs)
    }

    /// The chord mode actually used.
    pub fn effective_color_mode(&self) -> ChordColorMode {
        if self.clash_point.is_some() {
            ChordColorMode::ClashColor
        } else {
            self.chord_color_mode
        }
    }
}

/// Entities the server declares highlighted, in corpus order. Each
/// selection contributes itself and what it implies: a block or turn its
/// session, a turn its blocks, a clash point the blocks referencing it.
/// The set is the union over selections, so adding the session of an
/// already selected block changes nothing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HighlightSet {
    pub sessions: Vec<SessionId>,
    pub turns: Vec<TurnId>,
    pub blocks: Vec<BlockId>,
    pub clash_points: Vec<ClashPointId>,
    /// Blocks the content view lists: those of the selected sessions, or
    /// every block when no session is implied.
    pub listed_blocks: Vec<BlockId>,
    /// Card to scroll to the top.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scroll_to: Option<BlockId>,
}

impl HighlightSet {
    pub fn contains_session(&self, id: &SessionId) -> bool {
        self.sessions.contains(id)
    }

    pub fn contains_block(&self, id: &BlockId) -> bool {
        self.blocks.contains(id)
    }

    pub fn contains_clash_point(&self, id: &ClashPointId) -> bool {
        self.clash_points.contains(id)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("filter names unknown {kind} {id:?}")]
    UnknownFilterTarget { kind: TargetKind, id: String },
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Checks every filter id against the corpus and computes the highlight set.
pub fn resolve_filter(corpus: &DebateCorpus, filter: &FilterState) -> Result<HighlightSet, SceneError> {
    let unknown = |kind, id: &dyn fmt::Display| SceneError::UnknownFilterTarget { kind, id: id.to_string() };
    let mut sessions = BTreeSet::new();
    let mut turns = BTreeSet::new();
    let mut blocks = BTreeSet::new();
    let mut clash = BTreeSet::new();
    if let Some(s) = &filter.session {
        corpus.session(s).ok_or_else(|| unknown(TargetKind::Session, s))?;
        sessions.insert(s.clone());
    }
    if let Some(t) = &filter.turn {
        let turn = corpus.turn(t).ok_or_else(|| unknown(TargetKind::Turn, t))?;
        turns.insert(t.clone());
        sessions.insert(turn.session_id.clone());
        blocks.extend(turn.block_ids.iter().cloned());
    }
    if let Some(b) = &filter.block {
        let block = corpus.block(b).ok_or_else(|| unknown(TargetKind::Block, b))?;
        blocks.insert(b.clone());
        sessions.insert(block.session_id.clone());
    }
    if let Some(c) = &filter.clash_point {
        corpus.clash_point(c).ok_or_else(|| unknown(TargetKind::ClashPoint, c))?;
        clash.insert(c.clone());
        blocks.extend(corpus.blocks().iter().filter(|b| b.references_clash(c)).map(|b| b.id.clone()));
    }
    let listed_blocks = corpus
        .blocks()
        .iter()
        .filter(|b| sessions.is_empty() || sessions.contains(&b.session_id))
        .map(|b| b.id.clone())
        .collect();
    let scroll_to = filter
        .block
        .clone()
        .or_else(|| filter.turn.as_ref().and_then(|t| corpus.turn(t)).and_then(|t| t.block_ids.first().cloned()));
    Ok(HighlightSet {
        sessions: corpus.sessions().iter().filter(|s| sessions.contains(&s.id)).map(|s| s.id.clone()).collect(),
        turns: corpus.turns().iter().filter(|t| turns.contains(&t.id)).map(|t| t.id.clone()).collect(),
        blocks: corpus.blocks().iter().filter(|b| blocks.contains(&b.id)).map(|b| b.id.clone()).collect(),
        clash_points: corpus.clash_points().iter().filter(|c| clash.contains(&c.id)).map(|c| c.id.clone()).collect(),
        listed_blocks,
        scroll_to,
    })
}

/// Which part of the scene to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum View {
    All,
    Process,
    Strategy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SceneGraph {
    pub view: View,
    pub view_box: Rect,
    pub filter: FilterState,
    pub highlight: HighlightSet,
    pub styles: BTreeMap<String, Style>,
    pub root: SceneNode,
    pub cards: Vec<ContentCard>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub process: Option<ProcessLayout>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyLayout>,
    pub warnings: Vec<LayoutWarning>,
}

/// Root-level subtree ids, in drawing order.
pub const SUBTREES: [&str; 6] = ["frame", "legend", "session", "process", "strategy", "content"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneInvariantError {
    #[error("{kind} node handle {target_kind} {target_id:?} does not resolve")]
    DanglingHandle { kind: &'static str, target_kind: TargetKind, target_id: String },
    #[error("{kind} node has a non-finite coordinate")]
    NonFinite { kind: &'static str },
    #[error("style {0:?} is not in the style table")]
    UnknownStyle(String),
}

impl SceneGraph {
    pub fn nodes(&self) -> Vec<&SceneNode> {
        self.root.walk()
    }

    pub fn subtree(&self, id: &str) -> Option<&SceneNode> {
        self.root.children.iter().find(|n| n.id.as_deref() == Some(id))
    }

    /// Node count per kind across the whole tree.
    pub fn count_by_kind(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for n in self.nodes() {
            *out.entry(n.kind()).or_default() += 1;
        }
        out
    }

    /// Chord nodes in the process subtree.
    pub fn chords(&self) -> Vec<&SceneNode> {
        self.subtree("process")
            .map(|p| p.walk())
            .unwrap_or_default()
            .into_iter()
            .filter(|n| n.kind() == "chord")
            .collect()
    }

    /// Restricts the scene to one view. The frame, legend and session view
    /// stay in every view since the session circles anchor both others.
    pub fn into_view(mut self, view: View) -> SceneGraph {
        let drop: &[&str] = match view {
            View::All => &[],
            View::Process => &["strategy", "content"],
            View::Strategy => &["process", "content"],
        };
        self.root.children.retain(|n| n.id.as_deref().is_none_or(|id| !drop.contains(&id)));
        match view {
            View::All => {}
            View::Process => {
                self.strategy = None;
                self.cards.clear();
            }
            View::Strategy => {
                self.process = None;
                self.cards.clear();
            }
        }
        self.view = view;
        self
    }

    /// Checks that handles resolve, numbers are finite and styles exist.
    pub fn check(&self, corpus: &DebateCorpus) -> Result<(), SceneInvariantError> {
        for n in self.nodes() {
            if n.shape.numbers().iter().any(|x| !x.is_finite()) {
                return Err(SceneInvariantError::NonFinite { kind: n.kind() });
            }
            if let Shape::Chord { runs, .. } = &n.shape {
                for r in runs {
                    for s in r.style_ref.split_whitespace() {
                        if !self.styles.contains_key(s) {
                            return Err(SceneInvariantError::UnknownStyle(s.to_string()));
                        }
                    }
                }
            }
            for s in n.style_ref.split_whitespace() {
                if !self.styles.contains_key(s) {
                    return Err(SceneInvariantError::UnknownStyle(s.to_string()));
                }
            }
            if let Some(h) = &n.interaction_handle {
                let id = h.target_id.as_str();
                let ok = match h.target_kind {
                    TargetKind::Session => corpus.session(&id.into()).is_some(),
                    TargetKind::Turn => corpus.turn(&id.into()).is_some(),
                    TargetKind::Block => corpus.block(&id.into()).is_some(),
                    TargetKind::ClashPoint => corpus.clash_point(&id.into()).is_some(),
                    TargetKind::Disagreement => corpus.disagreement(&id.into()).is_some(),
                    TargetKind::Strategy => corpus.strategy_catalog().get(&id.into()).is_some(),
                };
                if !ok {
                    return Err(SceneInvariantError::DanglingHandle {
                        kind: n.kind(),
                        target_kind: h.target_kind,
                        target_id: id.to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Scene for the process or strategy view alone.
pub fn build_view(
    corpus: &DebateCorpus,
    config: &LayoutConfig,
    filter: &FilterState,
    view: View,
) -> Result<SceneGraph, SceneError> {
    Ok(build_scene(corpus, config, filter)?.into_view(view))
}

#[cfg(test)]
mod tests;
