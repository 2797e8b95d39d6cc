//! Word counting for phrase-length rules.

use unicode_segmentation::UnicodeSegmentation;

/// Counts "words" in a short phrase such as a clash-point label.
pub trait PhraseTokenizer: Send + Sync {
    fn count_words(&self, phrase: &str) -> usize;
}

/// Whitespace-delimited tokens.
#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceTokenizer;

impl PhraseTokenizer for WhitespaceTokenizer {
    fn count_words(&self, phrase: &str) -> usize {
        phrase.split_whitespace().count()
    }
}

/// For scripts without word separators: every whitespace-delimited chunk
/// contributes one word per `group` graphemes, rounded up.
#[derive(Debug, Clone, Copy)]
pub struct GraphemeGroupTokenizer {
    pub group: usize,
}

impl Default for GraphemeGroupTokenizer {
    fn default() -> Self {
        Self { group: 2 }
    }
}

impl PhraseTokenizer for GraphemeGroupTokenizer {
    fn count_words(&self, phrase: &str) -> usize {
        let group = self.group.max(1);
        phrase.split_whitespace().map(|chunk| chunk.graphemes(true).count().div_ceil(group)).sum()
    }
}

pub fn tokenizer_for_language(tag: &str) -> Box<dyn PhraseTokenizer> {
    if crate::text::is_cjk_language(tag) {
        Box::new(GraphemeGroupTokenizer::default())
    } else {
        Box::new(WhitespaceTokenizer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_words() {
        assert_eq!(WhitespaceTokenizer.count_words("Value Prioritization"), 2);
        assert_eq!(WhitespaceTokenizer.count_words("  ideal "), 1);
    }

    #[test]
    fn grapheme_groups() {
        let t = GraphemeGroupTokenizer::default();
        assert_eq!(t.count_words("价值排序"), 2);
        assert_eq!(t.count_words("理想"), 1);
        assert_eq!(t.count_words("未来可预测性"), 3);
        assert_eq!(t.count_words("幸福之路径"), 3);
    }
}
