//! Text helpers shared by ingest, annotation and layout: sentence splitting,
//! grapheme counting and script classification.

use unicode_segmentation::UnicodeSegmentation;

/// Splits `text` into sentences using Unicode sentence boundaries.
///
/// Whitespace-only pieces are folded into the neighbouring sentence, so the
/// concatenation of the returned slices is always exactly `text`.
pub fn sentences(text: &str) -> Vec<&str> {
    let mut bounds: Vec<(usize, usize)> = Vec::new();
    let mut offset = 0usize;
    let mut leading: Option<usize> = None;
    for piece in text.split_sentence_bounds() {
        let end = offset + piece.len();
        if piece.trim().is_empty() {
            match bounds.last_mut() {
                Some(last) => last.1 = end,
                None => {
                    leading.get_or_insert(offset);
                }
            }
        } else {
            let start = leading.take().unwrap_or(offset);
            bounds.push((start, end));
        }
        offset = end;
    }
    bounds.into_iter().map(|(s, e)| &text[s..e]).collect()
}

/// Number of sentences in `text`.
pub fn sentence_count(text: &str) -> usize {
    sentences(text).len()
}

/// Graphemes that are not whitespace.
pub fn visible_grapheme_count(text: &str) -> usize {
    text.graphemes(true).filter(|g| !g.chars().all(char::is_whitespace)).count()
}

pub fn whitespace_token_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// True for language tags written without word separators (Chinese,
/// Japanese, Korean). Accepts BCP-47 tags and plain English names.
pub fn is_cjk_language(tag: &str) -> bool {
    let tag = tag.trim().to_ascii_lowercase();
    let primary = tag.split(['-', '_']).next().unwrap_or("");
    matches!(primary, "zh" | "ja" | "ko" | "yue" | "cmn" | "chinese" | "japanese" | "korean")
}

/// Wide East Asian characters, including fullwidth punctuation.
pub fn is_wide_char(c: char) -> bool {
    matches!(c as u32,
        0x1100..=0x115F
        | 0x2E80..=0x303E
        | 0x3041..=0x33FF
        | 0x3400..=0x4DBF
        | 0x4E00..=0x9FFF
        | 0xA000..=0xA4CF
        | 0xAC00..=0xD7A3
        | 0xF900..=0xFAFF
        | 0xFE30..=0xFE4F
        | 0xFF00..=0xFF60
        | 0xFFE0..=0xFFE6
        | 0x20000..=0x2FFFD
        | 0x30000..=0x3FFFD)
}

/// Collapses every whitespace run out of `text`; used to compare texts that
/// were split and rejoined.
pub fn strip_whitespace(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn english_sentences_preserve_text() {
        let t = "First point. Second point! Third?  Fourth";
        let s = sentences(t);
        assert_eq!(s.len(), 4);
        assert_eq!(s.concat(), t);
        assert_eq!(s[0], "First point. ");
    }

    #[test]
    fn chinese_sentences_split_on_full_stop() {
        let t = "我们认为就业很重要。对方辩友不同意！为什么？";
        let s = sentences(t);
        assert_eq!(s.len(), 3);
        assert_eq!(s.concat(), t);
    }

    #[test]
    fn leading_whitespace_joins_first_sentence() {
        let t = "  Hello there. Bye.";
        let s = sentences(t);
        assert_eq!(s.len(), 2);
        assert_eq!(s.concat(), t);
    }

    #[test]
    fn empty_and_blank_have_no_sentences() {
        assert!(sentences("").is_empty());
        assert!(sentences("   \n").is_empty());
    }

    #[test]
    fn grapheme_counts_skip_spaces() {
        assert_eq!(visible_grapheme_count("价值排序"), 4);
        assert_eq!(visible_grapheme_count("价值 排序"), 4);
        assert_eq!(visible_grapheme_count(""), 0);
    }

    #[test]
    fn language_tags() {
        assert!(is_cjk_language("zh-CN"));
        assert!(is_cjk_language("Chinese"));
        assert!(!is_cjk_language("en"));
        assert!(!is_cjk_language("English"));
    }
}
