//! A Chinese corpus with the session, turn and debater counts of the ICDI
//! final in the dataset table: 8 debaters, 13 sessions, 181 turns and
//! roughly 12K characters of content.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{add_clash_structure, Placed, SynthConfig, Vocabulary, STRATEGIES};
use crate::model::{CorpusBuilder, DebateCorpus, Side, DEFAULT_SHORT_BLOCK_THRESHOLD};
use crate::text::{sentence_count, visible_grapheme_count};

pub const ICDI_SEED: u64 = 181;

/// Turns per session, in order.
pub const ICDI_TURN_PLAN: [usize; 13] = [1, 1, 16, 16, 1, 1, 22, 22, 1, 1, 97, 1, 1];

/// Structure the icdi-shape fixture must reproduce, plus the declared
/// content length it is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IcdiManifest {
    pub debaters: usize,
    pub sessions: usize,
    pub turns: usize,
    /// "~12 K" characters.
    pub declared_content_length: usize,
    /// Relative band around the declared length.
    pub content_length_tolerance: f64,
}

impl Default for IcdiManifest {
    fn default() -> Self {
        Self {
            debaters: 8,
            sessions: 13,
            turns: ICDI_TURN_PLAN.iter().sum(),
            declared_content_length: 12_000,
            content_length_tolerance: 0.05,
        }
    }
}

enum Format {
    /// One debater speaks once.
    Speech { side: Side, ordinal: u32, chars: usize },
    /// Two debaters alternate; `ordinal` 0 cycles through the team.
    Exchange { first: Side, ordinals: (u32, u32), chars: usize },
}

const SESSIONS: [(&str, Format); 13] = [
    ("正方一辩开篇立论", Format::Speech { side: Side::Affirmative, ordinal: 1, chars: 880 }),
    ("反方一辩开篇立论", Format::Speech { side: Side::Negative, ordinal: 1, chars: 880 }),
    ("正方二辩盘问", Format::Exchange { first: Side::Affirmative, ordinals: (2, 0), chars: 36 }),
    ("反方二辩盘问", Format::Exchange { first: Side::Negative, ordinals: (2, 0), chars: 36 }),
    ("正方二辩小结", Format::Speech { side: Side::Affirmative, ordinal: 2, chars: 400 }),
    ("反方二辩小结", Format::Speech { side: Side::Negative, ordinal: 2, chars: 400 }),
    ("正方三辩对辩", Format::Exchange { first: Side::Affirmative, ordinals: (3, 3), chars: 40 }),
    ("反方三辩对辩", Format::Exchange { first: Side::Negative, ordinals: (3, 3), chars: 40 }),
    ("正方三辩质询小结", Format::Speech { side: Side::Affirmative, ordinal: 3, chars: 400 }),
    ("反方三辩质询小结", Format::Speech { side: Side::Negative, ordinal: 3, chars: 400 }),
    ("自由辩论", Format::Exchange { first: Side::Affirmative, ordinals: (0, 0), chars: 22 }),
    ("反方四辩总结陈词", Format::Speech { side: Side::Negative, ordinal: 4, chars: 880 }),
    ("正方四辩总结陈词", Format::Speech { side: Side::Affirmative, ordinal: 4, chars: 880 }),
];

const OPENERS: &[&str] =
    &["", "", "", "因为", "所以", "其实", "确实", "换句话说，", "根据调查，", "研究表明，", "难道"];

const CLAUSES: &[&str] = &[
    "就业前景决定了学生未来的生活质量",
    "兴趣才是长期学习的动力",
    "专业的冷热会随着市场不断变化",
    "家庭对志愿填报有很大的影响",
    "高考之后的选择关系到一生",
    "热门专业的毕业生并不一定好找工作",
    "很多学生在填志愿时并不了解自己",
    "社会需要的是有能力的人才",
    "薪资回报是一个现实的考量",
    "大学教育不仅仅是职业培训",
    "对方辩友混淆了首要与唯一",
    "数据显示近半数毕业生从事非本专业工作",
    "个人价值的实现离不开社会认可",
    "我们从来没有否认兴趣的重要",
    "理想需要建立在现实的基础上",
    "专业能力可以在不同行业之间迁移",
    "选择专业本质上是在做价值排序",
    "就业率高的专业往往竞争激烈",
];

const CLASH_LABELS: &[&str] = &["就业前景", "个人兴趣", "社会需求", "价值排序", "家庭期待"];
const DISAGREEMENT_LABELS: &[&str] =
    &["专业冷热", "市场变化", "兴趣培养", "长期发展", "职业回报", "理想现实", "能力迁移"];
const VIEWPOINTS: &[(&str, &str)] =
    &[("稳定", "多变"), ("重要", "次要"), ("优先", "其次"), ("可靠", "虚幻"), ("现实", "理想"), ("可控", "难测")];

/// One clause when `short`, otherwise two joined by a comma.
fn sentence(rng: &mut ChaCha8Rng, short: bool) -> String {
    let opener = OPENERS.choose(rng).expect("openers");
    let a = CLAUSES.choose(rng).expect("clauses");
    let end = if opener.starts_with("难道") || rng.random_bool(0.15) { "？" } else { "。" };
    if short {
        return format!("{opener}{a}{end}");
    }
    let b = CLAUSES.choose(rng).expect("clauses");
    format!("{opener}{a}，{b}{end}")
}

/// Sentences until the text reaches about `chars` graphemes.
fn turn_sentences(rng: &mut ChaCha8Rng, chars: usize) -> Vec<String> {
    let target = (chars as f64 * rng.random_range(0.8..1.2)).round() as usize;
    let mut out: Vec<String> = Vec::new();
    let mut len = 0;
    while len < target {
        let s = sentence(rng, target - len < 24);
        len += visible_grapheme_count(&s);
        out.push(s);
    }
    out
}

const SENTENCES_PER_BLOCK: usize = 3;

/// The icdi-shape corpus. Deterministic: the seed is fixed.
pub fn icdi_shape() -> DebateCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(ICDI_SEED);
    let mut b = CorpusBuilder::new("icdi-shape", "zh").format("icdi");
    for side in Side::BOTH {
        let team = if side == Side::Affirmative { "正方" } else { "反方" };
        for (i, n) in ["一", "二", "三", "四"].iter().enumerate() {
            b.debater(&format!("{}{}", side.letter().to_ascii_lowercase(), i + 1), side, &format!("{team}{n}辩"));
        }
    }
    let debater = |side: Side, ordinal: u32| format!("{}{ordinal}", side.letter().to_ascii_lowercase());

    let mut placed: Vec<Placed> = Vec::new();
    let mut turn_no = 0;
    for (s, ((title, format), &turns)) in SESSIONS.iter().zip(&ICDI_TURN_PLAN).enumerate() {
        b.session(&format!("s{}", s + 1), title);
        for t in 0..turns {
            turn_no += 1;
            let (side, ordinal, chars) = match *format {
                Format::Speech { side, ordinal, chars } => (side, ordinal, chars),
                Format::Exchange { first, ordinals, chars } => {
                    let side = if t % 2 == 0 { first } else { first.opposite() };
                    let fixed = if t % 2 == 0 { ordinals.0 } else { ordinals.1 };
                    let ordinal = if fixed == 0 { (t / 2 % 4) as u32 + 1 } else { fixed };
                    (side, ordinal, chars)
                }
            };
            b.turn(&format!("t{turn_no}"), &debater(side, ordinal));
            let sentences = turn_sentences(&mut rng, chars);
            for chunk in sentences.chunks(SENTENCES_PER_BLOCK) {
                let id = format!("b{}", placed.len() + 1);
                let text = chunk.concat();
                b.block(&id, &text);
                let n = sentence_count(&text);
                if rng.random_bool(0.55) {
                    let first = STRATEGIES.choose(&mut rng).expect("catalog");
                    b.tag(first, 0, rng.random_range(1..=n));
                    // the negative team pairs reasoning with evidence
                    if side == Side::Negative && *first == "reasoning" && rng.random_bool(0.6) {
                        b.tag("evidence", rng.random_range(0..n), n);
                    }
                }
                let eligible = visible_grapheme_count(&text) >= DEFAULT_SHORT_BLOCK_THRESHOLD;
                placed.push(Placed { id, side, eligible });
            }
        }
    }
    let config = SynthConfig {
        clash_points: 4..=4,
        disagreements_per_clash: 2..=3,
        path_len: 3..=9,
        cross_side: 0.7,
        ..SynthConfig::default()
    };
    let vocabulary = Vocabulary { clash: CLASH_LABELS, disagreement: DISAGREEMENT_LABELS, viewpoints: VIEWPOINTS };
    add_clash_structure(&mut rng, &mut b, &placed, &vocabulary, &config);
    b.build()
}
