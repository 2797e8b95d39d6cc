//! Hand-written demo material: two small corpora for the golden SVGs, a
//! raw transcript for the annotation pipeline, and a scripted stand-in for
//! the model used to record replay fixtures.

use serde_json::{json, Value};

use crate::annotate::{
    label_with_keywords, AuthoredClashPoint, AuthoredDisagreement, KeywordTable, LlmRequest, LlmTransport, Transcript,
    TranscriptSession, TranscriptTurn, TransportError,
};
use crate::model::{Competition, CorpusBuilder, DebateCorpus, Debater, Side, StrategyCatalog};

/// Four sessions, fourteen blocks, two clash points.
pub fn demo_corpus() -> DebateCorpus {
    let mut b = CorpusBuilder::new("demo", "en").format("demo");
    b.debater("a1", Side::Affirmative, "Alice")
        .debater("a2", Side::Affirmative, "Aaron")
        .debater("n1", Side::Negative, "Nora")
        .debater("n2", Side::Negative, "Noah");
    b.session("s1", "Opening").turn("t1", "a1");
    b.block(
        "b1",
        "Employment prospects must come first when students pick a major. Graduates carry debt and need stable work. \
         A degree that leads nowhere wastes four years of effort and money.",
    )
    .tag("reasoning", 1, 3);
    b.block(
        "b2",
        "According to the national survey, sixty percent of graduates now work outside their field. \
         Students who ignored the job market paid the price for years afterwards.",
    )
    .tag("evidence", 0, 2);
    b.turn("t2", "n1");
    b.block(
        "b3",
        "Interest is what keeps a student learning for four long years and beyond. \
         A student who hates the subject will not excel, whatever the market says today.",
    )
    .tag("reasoning", 0, 2);
    b.block(
        "b4",
        "The market shifts faster than any degree can be completed by a freshman. \
         Studies of hot majors show that yesterday's boom fields are crowded today.",
    )
    .tag("evidence", 1, 2)
    .tag("reasoning", 0, 1);

    b.session("s2", "Cross-examination").turn("t3", "a2");
    b.block(
        "b5",
        "Why should a family spend its savings on a passion that cannot pay the rent? \
         How can interest alone feed a graduate who cannot find a job?",
    )
    .tag("questioning", 0, 2);
    b.turn("t4", "n2");
    b.block("b6", "Because interest builds skill, and skill finds work in the end.").tag("reasoning", 0, 1);
    b.turn("t5", "a2");
    b.block(
        "b7",
        "I agree that skill matters, but skill in a field nobody hires for is wasted. \
         The real question is which skills the market will pay for in ten years.",
    )
    .tag("agreement", 0, 1)
    .tag("reframing", 1, 2);
    b.turn("t6", "n2");
    b.block(
        "b8",
        "Nobody can predict the market ten years ahead, and the data on forecasts is poor. \
         So a stable passion is a safer bet than a volatile prediction about jobs.",
    )
    .tag("evidence", 0, 1)
    .tag("reasoning", 1, 2);

    b.session("s3", "Free debate").turn("t7", "a1");
    b.block(
        "b9",
        "Salary is not greed, it is security for the whole family after graduation. \
         Therefore employment prospects remain the first consideration for most students.",
    )
    .tag("reasoning", 1, 2);
    b.turn("t8", "n1");
    b.block(
        "b10",
        "In other words, the affirmative wants students to chase salaries they cannot predict. \
         Our side says choose what you love and the income will follow over time.",
    )
    .tag("reframing", 0, 1);
    b.turn("t9", "a2");
    b.block("b11", "That is beside the point. Loans are due whether you love your major or not.").tag("ignoring", 0, 1);
    b.turn("t10", "n2");
    b.block(
        "b12",
        "Skills transfer across fields, so a passionate student adapts when the market changes. \
         Research on career changers shows that motivation predicts success better than major.",
    )
    .tag("reasoning", 0, 1)
    .tag("evidence", 1, 2);

    b.session("s4", "Closing").turn("t11", "n1");
    b.block(
        "b13",
        "Tonight we showed that interest sustains effort while the market keeps moving. \
         A major chosen for love outlasts a major chosen for a forecast that will change.",
    )
    .tag("reasoning", 0, 2);
    b.turn("t12", "a1");
    b.block(
        "b14",
        "We showed that jobs decide whether a graduate can live the life they studied for. \
         Admittedly interest matters, but employment prospects must come first in that choice.",
    )
    .tag("agreement", 1, 2);

    b.clash_point("cp1", "career prospects").clash_point("cp2", "personal interest");
    b.disagreement("d1", "cp1", "market shifts", ("stable", "volatile"), &["b2", "b4", "b7", "b8", "b12"])
        .disagreement("d2", "cp1", "salary matters", ("decisive", "minor"), &["b1", "b5", "b9", "b10", "b14"])
        .disagreement("d3", "cp2", "passion lasts", ("fleeting", "lasting"), &["b3", "b5", "b8", "b13"])
        .disagreement("d4", "cp2", "skills transfer", ("narrow", "broad"), &["b7", "b12"]);
    b.build()
}

/// A three-session Chinese demo, measured in graphemes.
pub fn demo_corpus_zh() -> DebateCorpus {
    let mut b = CorpusBuilder::new("demo-zh", "zh").format("demo");
    b.debater("a1", Side::Affirmative, "正方一辩")
        .debater("a2", Side::Affirmative, "正方二辩")
        .debater("n1", Side::Negative, "反方一辩")
        .debater("n2", Side::Negative, "反方二辩");
    b.session("s1", "开篇立论").turn("t1", "a1");
    b.block("b1", "我方认为就业前景应当是填报志愿的首要考虑。因为毕业生需要稳定的工作来承担生活的压力。").tag(
        "reasoning",
        1,
        2,
    );
    b.block("b2", "根据调查数据，近半数毕业生从事与专业无关的工作，这正是忽视就业的代价。").tag("evidence", 0, 1);
    b.turn("t2", "n1");
    b.block("b3", "我方认为兴趣才是大学四年持续学习的动力。没有兴趣的学习很难走得长远。").tag("reasoning", 0, 2);
    b.block("b4", "专业的冷热随着市场不断变化，今天的热门专业明天可能就会过剩。").tag("reasoning", 0, 1);
    b.session("s2", "自由辩论").turn("t3", "a2");
    b.block("b5", "难道对方辩友认为家庭可以不考虑学费和就业的现实吗？请正面回答。").tag("questioning", 0, 1);
    b.turn("t4", "n2");
    b.block("b6", "确实要考虑现实，但是现实不等于唯一标准，兴趣同样是现实的一部分。").tag("agreement", 0, 1).tag(
        "reframing",
        0,
        1,
    );
    b.turn("t5", "a2");
    b.block("b7", "换句话说，对方承认了就业的重要性。那么首要考虑为什么不能是就业？").tag("reframing", 0, 2);
    b.turn("t6", "n2");
    b.block("b8", "研究表明能力可以在行业之间迁移，所以兴趣培养的能力同样能带来就业。").tag("evidence", 0, 1).tag(
        "reasoning",
        0,
        1,
    );
    b.session("s3", "总结陈词").turn("t7", "n1");
    b.block("b9", "市场难以预测，而兴趣稳定持久，所以我方坚持兴趣优先于就业前景。").tag("reasoning", 0, 1);
    b.turn("t8", "a1");
    b.block("b10", "理想需要建立在现实的基础上，就业前景决定了学生能否实现自己的理想。").tag("reasoning", 0, 1);
    b.clash_point("cp1", "就业前景").clash_point("cp2", "个人兴趣");
    b.disagreement("d1", "cp1", "市场变化", ("可控", "难测"), &["b2", "b4", "b7", "b9"])
        .disagreement("d2", "cp1", "家庭现实", ("现实", "理想"), &["b1", "b5", "b6", "b10"])
        .disagreement("d3", "cp2", "能力迁移", ("狭窄", "宽广"), &["b3", "b8"]);
    b.build()
}

fn turn(id: &str, debater: &str, text: &str) -> TranscriptTurn {
    TranscriptTurn { id: id.into(), debater_id: debater.into(), text: text.to_string() }
}

fn disagreement(id: &str, label: &str, vp: (&str, &str), cues: &[&str]) -> AuthoredDisagreement {
    AuthoredDisagreement {
        id: id.into(),
        label: label.to_string(),
        affirmative_viewpoint: vp.0.to_string(),
        negative_viewpoint: vp.1.to_string(),
        cues: cues.iter().map(|c| c.to_string()).collect(),
    }
}

/// Raw English debate with hand-authored clash structure, no blocks.
pub fn demo_transcript() -> Transcript {
    let debater = |id: &str, side: Side, ordinal: u32, name: &str| Debater {
        id: id.into(),
        side,
        ordinal: std::num::NonZeroU32::new(ordinal).expect("ordinal"),
        display_name: name.to_string(),
    };
    Transcript {
        competition: Competition { name: "demo-transcript".into(), language: "en".into(), format: "demo".into() },
        debaters: vec![
            debater("a1", Side::Affirmative, 1, "Alice"),
            debater("a2", Side::Affirmative, 2, "Aaron"),
            debater("n1", Side::Negative, 1, "Nora"),
            debater("n2", Side::Negative, 2, "Noah"),
        ],
        sessions: vec![
            TranscriptSession {
                id: "s1".into(),
                index: Some(1),
                title: "Opening".into(),
                turns: vec![
                    turn(
                        "t1",
                        "a1",
                        "Employment prospects must come first when students pick a major. Graduates carry debt and they \
                         need stable jobs to repay it. Therefore a degree that leads nowhere wastes four years of effort \
                         and money. According to the national survey, sixty percent of graduates now work outside their \
                         field. Students who ignored the job market paid the price for many years afterwards. Salary is \
                         security for the whole family, not greed.",
                    ),
                    turn(
                        "t2",
                        "n1",
                        "Interest is what keeps a student learning for four long years and beyond that. A student who \
                         hates the subject will not excel, whatever the market says today. The market shifts faster than \
                         any degree can be completed by a freshman. Studies of hot majors show that yesterday's boom fields \
                         are crowded with graduates today. Passion is the engine of effort, and effort is what employers \
                         reward in the end.",
                    ),
                ],
            },
            TranscriptSession {
                id: "s2".into(),
                index: Some(2),
                title: "Cross-examination".into(),
                turns: vec![
                    turn(
                        "t3",
                        "a2",
                        "Why should a family spend its savings on a passion that cannot pay the rent every month? How can \
                         interest alone feed a graduate who cannot find any job at all?",
                    ),
                    turn("t4", "n2", "Because interest builds skill. Skill finds work."),
                    turn(
                        "t5",
                        "a2",
                        "I agree that skill matters a great deal for every graduate in every field. But skill in a field \
                         nobody hires for is wasted on the market. The real question is which skills employers will pay \
                         a salary for in ten years.",
                    ),
                    turn(
                        "t6",
                        "n2",
                        "Nobody can predict the market ten years ahead, and the data on such forecasts is poor. So a \
                         lasting passion is a safer bet than a volatile prediction about jobs. Skills transfer across \
                         fields when the market changes direction.",
                    ),
                ],
            },
            TranscriptSession {
                id: "s3".into(),
                index: Some(3),
                title: "Closing".into(),
                turns: vec![
                    turn(
                        "t7",
                        "n1",
                        "Tonight we showed that interest sustains effort while the market keeps moving under our feet. \
                         In other words, a major chosen for love outlasts a major chosen for a forecast. Research on \
                         career changers shows that motivation predicts success better than the choice of major.",
                    ),
                    turn(
                        "t8",
                        "a1",
                        "We showed that jobs decide whether a graduate can live the life they studied for. Admittedly \
                         interest matters to every student in this room tonight. But employment prospects must come \
                         first, because the salary pays for everything else.",
                    ),
                ],
            },
        ],
        strategy_catalog: None,
        clash_points: vec![
            AuthoredClashPoint {
                id: "cp1".into(),
                label: "career prospects".into(),
                cues: vec!["employment".into(), "job".into(), "jobs".into()],
                disagreements: vec![
                    disagreement("d1", "market shifts", ("stable", "volatile"), &["market"]),
                    disagreement("d2", "salary matters", ("decisive", "minor"), &["salary", "debt"]),
                ],
            },
            AuthoredClashPoint {
                id: "cp2".into(),
                label: "personal interest".into(),
                cues: vec!["interest".into(), "passion".into()],
                disagreements: vec![
                    disagreement("d3", "passion lasts", ("fleeting", "lasting"), &["passion"]),
                    disagreement("d4", "skills transfer", ("narrow", "broad"), &["skill", "skills"]),
                ],
            },
        ],
        strategy_keywords: Default::default(),
    }
}

/// Deterministic stand-in for a model endpoint, answering every pipeline
/// prompt from the request text alone. Used to produce recordings; replay
/// then needs neither this nor a network.
///
/// Segmentation cuts every two sentences, labeling uses the keyword
/// markers, extraction returns the given clash structure, assignment
/// matches labels, viewpoints and cues, and path selection keeps every
/// candidate.
#[derive(Debug, Clone)]
pub struct ScriptedModel {
    pub structure: Vec<AuthoredClashPoint>,
}

impl ScriptedModel {
    pub fn for_transcript(t: &Transcript) -> Self {
        Self { structure: t.clash_points.clone() }
    }

    fn numbered(user: &str) -> Vec<&str> {
        user.lines()
            .filter_map(|l| l.strip_prefix('[').and_then(|r| r.split_once("] ")).map(|(_, text)| text))
            .collect()
    }

    fn segment(user: &str) -> Value {
        let n = Self::numbered(user).len();
        json!({ "cuts": (2..n).step_by(2).collect::<Vec<_>>() })
    }

    fn label(user: &str) -> Value {
        let body = user.split_once("\nBlock:\n").map_or("", |(_, b)| b);
        let sentences = Self::numbered(body);
        let tags = label_with_keywords(&sentences, &StrategyCatalog::default_refutation(), &KeywordTable::default());
        let tags: Vec<Value> = tags
            .iter()
            .map(|t| json!({"strategyId": t.strategy_id, "range": [t.sentence_range.start, t.sentence_range.end]}))
            .collect();
        json!({ "tags": tags })
    }

    fn extract(&self) -> Value {
        let cps: Vec<Value> = self
            .structure
            .iter()
            .map(|c| {
                let ds: Vec<Value> = c
                    .disagreements
                    .iter()
                    .map(|d| json!({"label": d.label, "affirmative": d.affirmative_viewpoint, "negative": d.negative_viewpoint}))
                    .collect();
                json!({"label": c.label, "disagreements": ds})
            })
            .collect();
        json!({ "clashPoints": cps })
    }

    /// Ids in the request are the pipeline's, which follow the order of
    /// the extraction reply, so they are read back from the listing.
    fn assign(&self, user: &str) -> Value {
        let (listing, block) = user.split_once("\nBlock ").unwrap_or((user, ""));
        let text = block.split_once('\n').map_or("", |(_, t)| t).to_lowercase();
        let words: Vec<&str> = text.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()).collect();
        let hit = |phrase: &str| {
            let p = phrase.to_lowercase();
            if p.contains(' ') {
                text.contains(&p)
            } else {
                words.contains(&p.as_str())
            }
        };
        let mut cps = Vec::new();
        let mut ds = Vec::new();
        let mut current: Option<&AuthoredClashPoint> = None;
        for line in listing.lines() {
            if let Some(rest) = line.strip_prefix("- ") {
                let Some((id, label)) = rest.split_once(": ") else { continue };
                current = self.structure.iter().find(|c| c.label == label);
                if current.is_some_and(|c| hit(&c.label) || c.cues.iter().any(|q| hit(q))) {
                    cps.push(id.to_string());
                }
            } else if let Some(rest) = line.strip_prefix("  - ") {
                let Some((id, rest)) = rest.split_once(": ") else { continue };
                let label = rest.split_once(" (").map_or(rest, |(l, _)| l);
                let Some(d) = current.and_then(|c| c.disagreements.iter().find(|d| d.label == label)) else { continue };
                let phrases = [&d.label, &d.affirmative_viewpoint, &d.negative_viewpoint].into_iter().chain(&d.cues);
                if phrases.into_iter().any(|p| hit(p)) {
                    ds.push(id.to_string());
                }
            }
        }
        json!({ "clashPointIds": cps, "disagreementIds": ds })
    }

    fn path(user: &str) -> Value {
        let ids: Vec<&str> = user
            .lines()
            .filter_map(|l| l.strip_prefix('[').and_then(|r| r.split_once(']')).map(|(id, _)| id))
            .collect();
        json!({ "path": ids })
    }
}

impl LlmTransport for ScriptedModel {
    fn complete(&self, request: &LlmRequest) -> Result<String, TransportError> {
        let kind = request.prompt_id.split('/').next().unwrap_or("");
        let reply = match kind {
            "segment" => Self::segment(&request.user),
            "label" => Self::label(&request.user),
            "extract" => self.extract(),
            "assign" => self.assign(&request.user),
            "path" => Self::path(&request.user),
            other => return Err(TransportError::Fatal(format!("no script for prompt {other:?}"))),
        };
        Ok(reply.to_string())
    }
}
