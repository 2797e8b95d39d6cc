//! Seeded synthetic corpora for demos, tests and benchmarks.
//!
//! Every generator is a pure function of its seed: the same seed gives the
//! same corpus on every platform (ChaCha8 stream, no floating point in the
//! structural decisions beyond `random_bool`).

mod demo;
mod icdi;

use std::ops::RangeInclusive;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{CorpusBuilder, DebateCorpus, Side, DEFAULT_SHORT_BLOCK_THRESHOLD};

pub use demo::{demo_corpus, demo_corpus_zh, demo_transcript, ScriptedModel};
pub use icdi::{icdi_shape, IcdiManifest, ICDI_SEED, ICDI_TURN_PLAN};

/// Knobs of [`generate`]. Ranges are inclusive and sampled uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub sessions: RangeInclusive<usize>,
    pub blocks_per_session: RangeInclusive<usize>,
    pub blocks_per_turn: RangeInclusive<usize>,
    pub words_per_block: RangeInclusive<usize>,
    pub clash_points: RangeInclusive<usize>,
    pub disagreements_per_clash: RangeInclusive<usize>,
    pub path_len: RangeInclusive<usize>,
    /// Probability that a path step moves to the other side.
    pub cross_side: f64,
    /// Probability that a block carries strategy tags at all.
    pub tag_probability: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            sessions: 1..=15,
            blocks_per_session: 1..=40,
            blocks_per_turn: 1..=4,
            words_per_block: 8..=90,
            clash_points: 1..=6,
            disagreements_per_clash: 1..=3,
            path_len: 1..=6,
            cross_side: 0.5,
            tag_probability: 0.6,
        }
    }
}

impl SynthConfig {
    /// Paths that stay with one side: few chords cross between the teams.
    pub fn one_sided() -> Self {
        Self {
            sessions: 6..=10,
            blocks_per_session: 15..=30,
            clash_points: 3..=5,
            disagreements_per_clash: 2..=4,
            path_len: 4..=8,
            cross_side: 0.04,
            ..Self::default()
        }
    }

    /// Direct exchanges: almost every path step answers the other side.
    pub fn interaction_heavy() -> Self {
        Self { cross_side: 0.95, ..Self::one_sided() }
    }
}

const WORDS: &[&str] = &[
    "students",
    "choose",
    "majors",
    "employment",
    "prospects",
    "interest",
    "market",
    "value",
    "family",
    "future",
    "skills",
    "salary",
    "passion",
    "security",
    "society",
    "talent",
    "career",
    "choice",
    "risk",
    "growth",
    "study",
    "data",
    "argument",
    "reason",
    "evidence",
    "university",
    "graduates",
    "demand",
    "ideal",
    "reality",
    "policy",
    "parents",
    "decision",
    "long",
    "term",
    "short",
    "stable",
    "changing",
    "industry",
    "field",
];

const CLASH_LABELS: &[&str] = &[
    "value prioritization",
    "market future",
    "personal interest",
    "family expectation",
    "social responsibility",
    "risk of change",
    "definition of success",
    "role of universities",
];

const DISAGREEMENT_LABELS: &[&str] = &[
    "career first",
    "market shifts",
    "passion fades",
    "parents decide",
    "skills transfer",
    "salary gap",
    "cold majors",
    "job security",
    "talent waste",
];

const VIEWPOINTS: &[(&str, &str)] = &[
    ("ideal", "reality"),
    ("stable", "volatile"),
    ("lasting", "fleeting"),
    ("guidance", "control"),
    ("yes", "no"),
    ("decisive", "minor"),
    ("rare", "common"),
];

const STRATEGIES: &[&str] = &["agreement", "reasoning", "evidence", "ignoring", "questioning", "reframing"];

fn sentence_text(rng: &mut ChaCha8Rng, words: usize) -> String {
    let mut s: Vec<&str> = (0..words).map(|_| *WORDS.choose(rng).expect("lexicon")).collect();
    let first = s[0];
    let mut out = String::new();
    let mut chars = first.chars();
    if let Some(c) = chars.next() {
        out.extend(c.to_uppercase());
        out.push_str(chars.as_str());
    }
    s.remove(0);
    for w in s {
        out.push(' ');
        out.push_str(w);
    }
    out.push('.');
    out
}

/// A block of `words` whitespace tokens split into sentences of 4 to 15
/// words; returns the text and its sentence count.
fn block_text(rng: &mut ChaCha8Rng, words: usize) -> (String, usize) {
    let mut left = words;
    let mut sentences = Vec::new();
    while left > 0 {
        let n = if left <= 15 { left } else { rng.random_range(4..=15).min(left - 4).max(4) };
        sentences.push(sentence_text(rng, n));
        left -= n;
    }
    let n = sentences.len();
    (sentences.join(" "), n)
}

struct Placed {
    id: String,
    side: Side,
    eligible: bool,
}

/// Later block for a path step: the nearest one of `want` side, else none.
fn next_on_path(blocks: &[Placed], from: usize, want: Side) -> Option<usize> {
    (from + 1..blocks.len()).find(|&j| blocks[j].eligible && blocks[j].side == want)
}

struct Vocabulary<'a> {
    clash: &'a [&'a str],
    disagreement: &'a [&'a str],
    viewpoints: &'a [(&'a str, &'a str)],
}

/// Draws clash points and disagreements whose paths walk forward through
/// `placed`, crossing sides with probability `config.cross_side`. Paths only
/// use blocks long enough to carry clash references.
fn add_clash_structure(
    rng: &mut ChaCha8Rng,
    b: &mut CorpusBuilder,
    placed: &[Placed],
    vocabulary: &Vocabulary<'_>,
    config: &SynthConfig,
) {
    let eligible: Vec<usize> = (0..placed.len()).filter(|&i| placed[i].eligible).collect();
    let mut labels: Vec<&str> = vocabulary.clash.to_vec();
    labels.shuffle(rng);
    let clash_count = rng.random_range(config.clash_points.clone()).min(labels.len());
    let mut d_no = 0;
    let mut disagreements = Vec::new();
    for (c, label) in labels.iter().take(clash_count).enumerate() {
        let cp = format!("cp{}", c + 1);
        b.clash_point(&cp, label);
        if eligible.is_empty() {
            continue;
        }
        for _ in 0..rng.random_range(config.disagreements_per_clash.clone()) {
            d_no += 1;
            let len = rng.random_range(config.path_len.clone());
            let mut at = *eligible.choose(rng).expect("non-empty");
            let mut path = vec![placed[at].id.clone()];
            while path.len() < len {
                let cross = rng.random_bool(config.cross_side);
                let want = if cross { placed[at].side.opposite() } else { placed[at].side };
                match next_on_path(placed, at, want) {
                    Some(j) => {
                        at = j;
                        path.push(placed[j].id.clone());
                    }
                    None => break,
                }
            }
            let label = vocabulary.disagreement.choose(rng).expect("labels");
            let vp = *vocabulary.viewpoints.choose(rng).expect("viewpoints");
            disagreements.push((format!("d{d_no}"), cp.clone(), *label, vp, path));
        }
    }
    for (id, cp, label, vp, path) in &disagreements {
        let path: Vec<&str> = path.iter().map(String::as_str).collect();
        b.disagreement(id, cp, label, *vp, &path);
    }
}

/// A random valid corpus drawn from `config`.
pub fn generate(config: &SynthConfig, seed: u64) -> DebateCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = CorpusBuilder::new(&format!("synthetic-{seed}"), "en");
    b.debater("a1", Side::Affirmative, "Affirmative One")
        .debater("a2", Side::Affirmative, "Affirmative Two")
        .debater("n1", Side::Negative, "Negative One")
        .debater("n2", Side::Negative, "Negative Two");

    let mut placed: Vec<Placed> = Vec::new();
    let sessions = rng.random_range(config.sessions.clone());
    let mut turn_no = 0;
    for s in 1..=sessions {
        b.session(&format!("s{s}"), &format!("Session {s}"));
        let mut left = rng.random_range(config.blocks_per_session.clone());
        let mut side = if rng.random_bool(0.5) { Side::Affirmative } else { Side::Negative };
        while left > 0 {
            turn_no += 1;
            let k = rng.random_range(config.blocks_per_turn.clone()).clamp(1, left);
            let debater = format!("{}{}", if side == Side::Affirmative { 'a' } else { 'n' }, rng.random_range(1..=2));
            b.turn(&format!("t{turn_no}"), &debater);
            for _ in 0..k {
                let id = format!("b{}", placed.len() + 1);
                let words = rng.random_range(config.words_per_block.clone());
                let (text, sentences) = block_text(&mut rng, words);
                b.block(&id, &text);
                if rng.random_bool(config.tag_probability) {
                    for _ in 0..rng.random_range(1..=3) {
                        let strategy = STRATEGIES.choose(&mut rng).expect("catalog");
                        let start = rng.random_range(0..sentences);
                        let end = rng.random_range(start + 1..=sentences);
                        b.tag(strategy, start, end);
                    }
                }
                placed.push(Placed { id, side, eligible: words >= DEFAULT_SHORT_BLOCK_THRESHOLD });
            }
            left -= k;
            side = side.opposite();
        }
    }

    let vocabulary = Vocabulary { clash: CLASH_LABELS, disagreement: DISAGREEMENT_LABELS, viewpoints: VIEWPOINTS };
    add_clash_structure(&mut rng, &mut b, &placed, &vocabulary, config);
    b.build()
}

/// [`generate`] with the default config.
pub fn random_corpus(seed: u64) -> DebateCorpus {
    generate(&SynthConfig::default(), seed)
}

pub fn one_sided_corpus(seed: u64) -> DebateCorpus {
    generate(&SynthConfig::one_sided(), seed)
}

pub fn interaction_heavy_corpus(seed: u64) -> DebateCorpus {
    generate(&SynthConfig::interaction_heavy(), seed)
}

#[cfg(test)]
mod tests;
