//! Label fitting with a portable width estimate.
//!
//! Widths come from a per-character advance table in em units: CJK and
//! other wide characters advance 1 em, Latin characters use the tabulated
//! classes below. Renderers may differ slightly; the table is what the
//! fitter and the golden files agree on.

use serde::{Deserialize, Serialize};

use crate::text::is_wide_char;

/// Font sizes are tried on this grid, starting at the minimum.
pub const FONT_STEP: f64 = 0.5;
/// Line height as a multiple of the font size.
pub const LINE_HEIGHT: f64 = 1.2;
const ELLIPSIS: char = '…';

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSize {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LabelFit {
    pub font_size: f64,
    /// Wrapped lines in reading order.
    pub lines: Vec<String>,
    /// Set when the text did not fit at the minimum font; the full text is
    /// then shown on demand.
    pub truncated: bool,
}

fn advance(c: char) -> f64 {
    if is_wide_char(c) {
        return 1.0;
    }
    match c {
        ELLIPSIS => 0.84,
        ' ' | 'i' | 'j' | 'l' | 'I' | '!' | '|' | '.' | ',' | ':' | ';' | '\'' => 0.28,
        'f' | 't' | 'r' | '(' | ')' | '[' | ']' | '-' => 0.36,
        'm' | 'w' => 0.84,
        'M' | 'W' => 0.92,
        '0'..='9' => 0.56,
        'a'..='z' => 0.52,
        'A'..='Z' => 0.66,
        _ => 0.6,
    }
}

/// Estimated rendered width of `text` at `font_size`.
pub fn estimate_text_width(text: &str, font_size: f64) -> f64 {
    font_size * em_width(text)
}

fn em_width(text: &str) -> f64 {
    text.chars().map(advance).sum()
}

/// Break units: runs of non-wide, non-space characters, and single wide
/// characters. `spaced` records whether whitespace preceded the unit.
struct Unit<'a> {
    text: &'a str,
    spaced: bool,
}

fn units(text: &str) -> Vec<Unit<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut spaced = false;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Unit { text: &text[s..i], spaced });
            }
            spaced = !out.is_empty();
        } else if is_wide_char(c) {
            if let Some(s) = start.take() {
                out.push(Unit { text: &text[s..i], spaced });
                spaced = false;
            }
            let end = i + c.len_utf8();
            out.push(Unit { text: &text[i..end], spaced });
            spaced = false;
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Unit { text: &text[s..], spaced });
    }
    out
}

/// Greedy wrap in em units. Returns `None` when a single unit is wider than
/// the line.
fn wrap_em(units: &[Unit<'_>], max_em: f64) -> Option<Vec<String>> {
    let space = advance(' ');
    let mut lines: Vec<String> = Vec::new();
    let mut line = String::new();
    let mut width = 0.0;
    for u in units {
        let w = em_width(u.text);
        if w > max_em + 1e-12 {
            return None;
        }
        let join = if line.is_empty() || !u.spaced { 0.0 } else { space };
        if !line.is_empty() && width + join + w > max_em + 1e-12 {
            lines.push(std::mem::take(&mut line));
            width = 0.0;
        } else if join > 0.0 {
            line.push(' ');
            width += join;
        }
        line.push_str(u.text);
        width += w;
    }
    if !line.is_empty() {
        lines.push(line);
    }
    Some(lines)
}

fn wrap_at(text: &str, font_size: f64, size: BoxSize) -> Option<Vec<String>> {
    let lines = wrap_em(&units(text), size.width / font_size)?;
    let height = lines.len() as f64 * LINE_HEIGHT * font_size;
    (height <= size.height + 1e-9).then_some(lines)
}

/// Whether `text` wraps into `size` at `font_size`.
pub fn fits(text: &str, font_size: f64, size: BoxSize) -> bool {
    wrap_at(text, font_size, size).is_some()
}

fn steps(font_min: f64, font_max: f64) -> usize {
    ((font_max - font_min) / FONT_STEP + 1e-9).floor() as usize
}

fn step_size(font_min: f64, k: usize) -> f64 {
    font_min + FONT_STEP * k as f64
}

/// Largest font on the grid `font_min + 0.5k ≤ font_max` at which `text`
/// fits `size`; otherwise `font_min` with truncated lines ending in an
/// ellipsis.
///
/// Fitting is monotone in font size (the wrap at size `f` equals the wrap
/// at size 1 in a box scaled by `1/f`), so binary search over the grid is
/// exact.
pub fn fit_label(text: &str, size: BoxSize, font_min: f64, font_max: f64) -> LabelFit {
    let n = steps(font_min, font_max);
    if fits(text, step_size(font_min, 0), size) {
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if fits(text, step_size(font_min, mid), size) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let font_size = step_size(font_min, lo);
        let lines = wrap_at(text, font_size, size).unwrap_or_default();
        return LabelFit { font_size, lines, truncated: false };
    }
    LabelFit { font_size: font_min, lines: truncate(text, font_min, size), truncated: true }
}

/// Wraps `text` into lines no wider than `width` at `font_size`, with no
/// height limit. Units wider than a line are broken by character.
pub fn wrap_text(text: &str, font_size: f64, width: f64) -> Vec<String> {
    let max_em = width / font_size;
    wrap_em(&units(text), max_em).unwrap_or_else(|| hard_wrap(text, max_em))
}

fn truncate(text: &str, font_size: f64, size: BoxSize) -> Vec<String> {
    let max_em = size.width / font_size;
    let max_lines = ((size.height + 1e-9) / (LINE_HEIGHT * font_size)).floor().max(1.0) as usize;
    let mut lines = hard_wrap(text, max_em);
    if lines.len() > max_lines {
        lines.truncate(max_lines);
        let last = lines.last_mut().expect("max_lines >= 1");
        let budget = max_em - advance(ELLIPSIS);
        while !last.is_empty() && em_width(last) > budget + 1e-12 {
            last.pop();
        }
        let kept = last.trim_end().len();
        last.truncate(kept);
        last.push(ELLIPSIS);
    }
    lines
}

/// Breaks by character so over-long words still fill lines.
fn hard_wrap(text: &str, max_em: f64) -> Vec<String> {
    let mut lines: Vec<String> = Vec::new();
    let mut line = String::new();
    let mut width = 0.0;
    for c in text.split_whitespace().collect::<Vec<_>>().join(" ").chars() {
        let w = advance(c);
        if !line.is_empty() && width + w > max_em + 1e-12 {
            lines.push(std::mem::take(&mut line).trim_end().to_string());
            width = 0.0;
            if c == ' ' {
                continue;
            }
        }
        line.push(c);
        width += w;
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines
}
