use serde::{Deserialize, Serialize};
use tracing::warn;

use super::client::{LlmClient, LlmRequest};
use super::fallback::{contains_marker, fallback_cuts, label_with_keywords, KeywordTable};
use super::transcript::{AuthoredClashPoint, AuthoredDisagreement};
use super::{AnnotateError, AnnotationWarning};
use crate::model::{
    tokenizer_for_language, BlockId, ClashPointId, ContentMetric, DebaterId, DisagreementId, Namespace, SentenceRange,
    SessionId, StrategyCatalog, StrategyId, StrategyTag, TurnId,
};
use crate::text;

const SEGMENT_SYSTEM: &str = "You split one debate turn into blocks. A block is a brief, self-contained argument \
with its reasoning and evidence. Sentences are numbered from 0. Reply with JSON only: {\"cuts\": [i, ...]} where \
each i is the index of a sentence that starts a new block, strictly increasing, never 0.";

const LABEL_SYSTEM: &str = "You identify refutation strategies in one debate block. Sentences are numbered from 0. \
Use only the strategy ids listed. Reply with JSON only: {\"tags\": [{\"strategyId\": id, \"range\": [start, end]}]} \
with end exclusive.";

const EXTRACT_SYSTEM: &str = "You extract the clash points of a debate: the fundamental disagreements from which all \
others derive. For each clash point give a 2 to 4 word label and its disagreements, each with a 2 to 3 word label \
and a one-word viewpoint per side. Reply with JSON only: {\"clashPoints\": [{\"label\": text, \"disagreements\": \
[{\"label\": text, \"affirmative\": word, \"negative\": word}]}]}.";

const ASSIGN_SYSTEM: &str = "You decide which clash points and disagreements one debate block refers to. Use only the \
ids listed. Reply with JSON only: {\"clashPointIds\": [id, ...], \"disagreementIds\": [id, ...]}.";

const PATH_SYSTEM: &str = "You trace how one disagreement develops across a debate. From the candidate blocks, keep \
those that are mutually related links in its argument chain. Reply with JSON only: {\"path\": [blockId, ...]}.";

/// How model-backed steps are answered.
#[derive(Debug, Clone, Copy)]
pub enum Annotator<'a> {
    /// Deterministic offline rules.
    Fallback,
    Llm(&'a LlmClient),
}

/// Shared inputs of every step.
#[derive(Debug, Clone)]
pub struct StepContext {
    pub language: String,
    pub metric: ContentMetric,
    pub short_block_threshold: usize,
    pub catalog: StrategyCatalog,
    pub keywords: KeywordTable,
}

impl StepContext {
    pub fn new(language: &str, catalog: StrategyCatalog) -> Self {
        Self {
            language: language.to_string(),
            metric: ContentMetric::for_language(language),
            short_block_threshold: crate::model::DEFAULT_SHORT_BLOCK_THRESHOLD,
            catalog,
            keywords: KeywordTable::default(),
        }
    }
}

fn unparsable(prompt_id: &str, message: impl Into<String>) -> AnnotateError {
    AnnotateError::LlmOutputUnparsable { prompt_id: prompt_id.to_string(), message: message.into() }
}

/// Parses a model reply, tolerating a fenced code block around the JSON.
fn parse_reply<T: for<'de> Deserialize<'de>>(prompt_id: &str, reply: &str) -> Result<T, AnnotateError> {
    let trimmed = reply.trim();
    let body = trimmed
        .strip_prefix("```json")
        .or_else(|| trimmed.strip_prefix("```"))
        .and_then(|s| s.strip_suffix("```"))
        .unwrap_or(trimmed);
    serde_json::from_str(body.trim()).map_err(|e| unparsable(prompt_id, e.to_string()))
}

fn numbered(sentences: &[&str]) -> String {
    sentences.iter().enumerate().map(|(i, s)| format!("[{i}] {}\n", s.trim())).collect()
}

// ---- segmentation ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SegmentedBlock {
    pub text: String,
    pub content_length: usize,
    pub too_short_for_clash: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CutsReply {
    cuts: Vec<usize>,
}

pub fn segment_prompt_id(turn: &TurnId) -> String {
    format!("segment/{turn}")
}

/// The request for a turn, or `None` when no model call is needed.
pub fn segment_request(ctx: &StepContext, client: &LlmClient, turn: &TurnId, text: &str) -> Option<LlmRequest> {
    if text.trim().is_empty() || ctx.metric.measure(text) < ctx.short_block_threshold {
        return None;
    }
    let sentences = text::sentences(text);
    (sentences.len() > 1).then(|| client.request(segment_prompt_id(turn), SEGMENT_SYSTEM, numbered(&sentences)))
}

/// Splits a turn into blocks. A turn below the short-block threshold stays
/// one block. Block texts are trimmed sentence groups, so concatenating
/// them gives back the turn up to whitespace.
pub fn segment_turn(
    ctx: &StepContext,
    annotator: Annotator<'_>,
    turn: &TurnId,
    text: &str,
) -> Result<Vec<SegmentedBlock>, AnnotateError> {
    let reply = match annotator {
        Annotator::Llm(client) => match segment_request(ctx, client, turn, text) {
            Some(req) => Some(client.call(&req)?),
            None => None,
        },
        Annotator::Fallback => None,
    };
    segment_with_reply(ctx, turn, text, reply.as_deref(), matches!(annotator, Annotator::Llm(_)))
}

pub(crate) fn segment_with_reply(
    ctx: &StepContext,
    turn: &TurnId,
    text: &str,
    reply: Option<&str>,
    llm: bool,
) -> Result<Vec<SegmentedBlock>, AnnotateError> {
    if text.trim().is_empty() {
        return Err(AnnotateError::EmptyTurn { turn: turn.to_string() });
    }
    let make = |t: &str| {
        let t = t.trim().to_string();
        let content_length = ctx.metric.measure(&t);
        SegmentedBlock { too_short_for_clash: content_length < ctx.short_block_threshold, content_length, text: t }
    };
    if ctx.metric.measure(text) < ctx.short_block_threshold {
        return Ok(vec![make(text)]);
    }
    let sentences = text::sentences(text);
    let cuts = match reply {
        Some(reply) => {
            let id = segment_prompt_id(turn);
            let cuts = parse_reply::<CutsReply>(&id, reply)?.cuts;
            let ok = cuts.windows(2).all(|w| w[0] < w[1]) && cuts.iter().all(|&c| c > 0 && c < sentences.len());
            if !ok {
                return Err(unparsable(&id, format!("cuts {cuts:?} invalid for {} sentences", sentences.len())));
            }
            cuts
        }
        None if llm => Vec::new(),
        None => fallback_cuts(sentences.len()),
    };
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(sentences.len());
    Ok(bounds.windows(2).map(|w| make(&sentences[w[0]..w[1]].concat())).collect())
}

// ---- strategy labeling ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TagsReply {
    tags: Vec<TagReply>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct TagReply {
    strategy_id: String,
    range: [usize; 2],
}

pub fn label_prompt_id(block: &BlockId) -> String {
    format!("label/{block}")
}

pub fn label_request(ctx: &StepContext, client: &LlmClient, block: &BlockId, text: &str) -> LlmRequest {
    let mut user = String::from("Strategies:\n");
    for e in &ctx.catalog.entries {
        user.push_str(&format!("- {}: {}\n", e.id, e.description));
    }
    user.push_str("\nBlock:\n");
    user.push_str(&numbered(&text::sentences(text)));
    client.request(label_prompt_id(block), LABEL_SYSTEM, user)
}

pub fn label_strategies(
    ctx: &StepContext,
    annotator: Annotator<'_>,
    block: &BlockId,
    text: &str,
) -> Result<Vec<StrategyTag>, AnnotateError> {
    let reply = match annotator {
        Annotator::Llm(client) => Some(client.call(&label_request(ctx, client, block, text))?),
        Annotator::Fallback => None,
    };
    label_with_reply(ctx, block, text, reply.as_deref())
}

pub(crate) fn label_with_reply(
    ctx: &StepContext,
    block: &BlockId,
    text: &str,
    reply: Option<&str>,
) -> Result<Vec<StrategyTag>, AnnotateError> {
    let sentences = text::sentences(text);
    let Some(reply) = reply else {
        return Ok(label_with_keywords(&sentences, &ctx.catalog, &ctx.keywords));
    };
    let id = label_prompt_id(block);
    let mut tags = Vec::new();
    for t in parse_reply::<TagsReply>(&id, reply)?.tags {
        let strategy_id = StrategyId::new(t.strategy_id);
        if ctx.catalog.get(&strategy_id).is_none() {
            return Err(AnnotateError::UnknownStrategyId { prompt_id: id, strategy_id: strategy_id.to_string() });
        }
        let [start, end] = t.range;
        if start >= end || end > sentences.len() {
            return Err(unparsable(&id, format!("range [{start}, {end}] invalid for {} sentences", sentences.len())));
        }
        tags.push(StrategyTag { strategy_id, sentence_range: SentenceRange::new(start, end) });
    }
    tags.sort_by_key(|t| (t.sentence_range.start, ctx.catalog.position(&t.strategy_id), t.sentence_range.end));
    tags.dedup();
    Ok(tags)
}

// ---- clash structure ----

/// Clash points with their disagreements, ids assigned.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClashStructure {
    pub clash_points: Vec<AuthoredClashPoint>,
}

impl ClashStructure {
    pub fn disagreements(&self) -> impl Iterator<Item = (&AuthoredClashPoint, &AuthoredDisagreement)> {
        self.clash_points.iter().flat_map(|c| c.disagreements.iter().map(move |d| (c, d)))
    }

    fn clash_position(&self, id: &ClashPointId) -> Option<usize> {
        self.clash_points.iter().position(|c| &c.id == id)
    }

    fn parent_of(&self, id: &DisagreementId) -> Option<&ClashPointId> {
        self.disagreements().find(|(_, d)| &d.id == id).map(|(c, _)| &c.id)
    }

    fn disagreement_position(&self, id: &DisagreementId) -> Option<usize> {
        self.disagreements().position(|(_, d)| &d.id == id)
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ExtractReply {
    clash_points: Vec<ExtractedClash>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtractedClash {
    label: String,
    #[serde(default)]
    disagreements: Vec<ExtractedDisagreement>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtractedDisagreement {
    label: String,
    affirmative: String,
    negative: String,
}

pub const EXTRACT_PROMPT_ID: &str = "extract";

pub fn extract_request(client: &LlmClient, blocks: &[(BlockId, &str)]) -> LlmRequest {
    let user: String = blocks.iter().map(|(id, t)| format!("[{id}] {}\n", t.trim())).collect();
    client.request(EXTRACT_PROMPT_ID.into(), EXTRACT_SYSTEM, user)
}

fn check_phrase(
    ctx: &StepContext,
    namespace: Namespace,
    phrase: &str,
    min: usize,
    max: usize,
) -> Result<(), AnnotateError> {
    let words = tokenizer_for_language(&ctx.language).count_words(phrase);
    if words < min || words > max {
        return Err(AnnotateError::SchemaViolation { namespace, phrase: phrase.to_string(), words, min, max });
    }
    Ok(())
}

fn check_structure(ctx: &StepContext, s: &ClashStructure) -> Result<(), AnnotateError> {
    for c in &s.clash_points {
        check_phrase(ctx, Namespace::ClashPoint, &c.label, 2, 4)?;
        for d in &c.disagreements {
            check_phrase(ctx, Namespace::Disagreement, &d.label, 2, 3)?;
            check_phrase(ctx, Namespace::Disagreement, &d.affirmative_viewpoint, 1, 1)?;
            check_phrase(ctx, Namespace::Disagreement, &d.negative_viewpoint, 1, 1)?;
        }
    }
    Ok(())
}

/// Clash points and disagreements for the whole debate. Offline, the
/// authored structure is used as is. With a model, labels are checked for
/// length and duplicates merged by exact label.
pub fn extract_clash_structure(
    ctx: &StepContext,
    annotator: Annotator<'_>,
    blocks: &[(BlockId, &str)],
    authored: &[AuthoredClashPoint],
) -> Result<ClashStructure, AnnotateError> {
    let reply = match annotator {
        Annotator::Llm(client) => Some(client.call(&extract_request(client, blocks))?),
        Annotator::Fallback => None,
    };
    extract_with_reply(ctx, reply.as_deref(), authored)
}

pub(crate) fn extract_with_reply(
    ctx: &StepContext,
    reply: Option<&str>,
    authored: &[AuthoredClashPoint],
) -> Result<ClashStructure, AnnotateError> {
    let Some(reply) = reply else {
        let s = ClashStructure { clash_points: authored.to_vec() };
        check_structure(ctx, &s)?;
        return Ok(s);
    };
    let parsed: ExtractReply = parse_reply(EXTRACT_PROMPT_ID, reply)?;
    let mut out = ClashStructure::default();
    let mut next_d = 0;
    for c in parsed.clash_points {
        let label = c.label.trim().to_string();
        let pos = match out.clash_points.iter().position(|x| x.label == label) {
            Some(p) => p,
            None => {
                out.clash_points.push(AuthoredClashPoint {
                    id: ClashPointId::new(format!("cp{}", out.clash_points.len() + 1)),
                    label,
                    cues: Vec::new(),
                    disagreements: Vec::new(),
                });
                out.clash_points.len() - 1
            }
        };
        for d in c.disagreements {
            let label = d.label.trim().to_string();
            if out.clash_points[pos].disagreements.iter().any(|x| x.label == label) {
                continue;
            }
            next_d += 1;
            out.clash_points[pos].disagreements.push(AuthoredDisagreement {
                id: DisagreementId::new(format!("d{next_d}")),
                label,
                affirmative_viewpoint: d.affirmative.trim().to_string(),
                negative_viewpoint: d.negative.trim().to_string(),
                cues: Vec::new(),
            });
        }
    }
    check_structure(ctx, &out)?;
    Ok(out)
}

// ---- reference assignment ----

/// A block between segmentation and corpus assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DraftBlock {
    pub id: BlockId,
    pub session_id: SessionId,
    pub turn_id: TurnId,
    pub debater_id: DebaterId,
    pub text: String,
    pub content_length: usize,
    pub too_short_for_clash: bool,
    pub strategy_tags: Vec<StrategyTag>,
    pub clash_point_ids: Vec<ClashPointId>,
    pub disagreement_ids: Vec<DisagreementId>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct AssignReply {
    #[serde(default)]
    clash_point_ids: Vec<String>,
    #[serde(default)]
    disagreement_ids: Vec<String>,
}

pub fn assign_prompt_id(block: &BlockId) -> String {
    format!("assign/{block}")
}

pub fn assign_request(client: &LlmClient, block: &DraftBlock, s: &ClashStructure) -> LlmRequest {
    let mut user = String::from("Clash points and disagreements:\n");
    for c in &s.clash_points {
        user.push_str(&format!("- {}: {}\n", c.id, c.label));
        for d in &c.disagreements {
            user.push_str(&format!(
                "  - {}: {} ({} / {})\n",
                d.id, d.label, d.affirmative_viewpoint, d.negative_viewpoint
            ));
        }
    }
    user.push_str(&format!("\nBlock {}:\n{}\n", block.id, block.text));
    client.request(assign_prompt_id(&block.id), ASSIGN_SYSTEM, user)
}

fn mentions(text_lower: &str, phrases: impl IntoIterator<Item = impl AsRef<str>>) -> bool {
    phrases.into_iter().any(|p| contains_marker(text_lower, p.as_ref()))
}

/// Offline matching: a block refers to a disagreement when it mentions its
/// label, a viewpoint or a cue, and to a clash point when it mentions its
/// label or a cue.
fn match_offline(block: &DraftBlock, s: &ClashStructure) -> (Vec<ClashPointId>, Vec<DisagreementId>) {
    let lower = block.text.to_lowercase();
    let mut cps = Vec::new();
    let mut ds = Vec::new();
    for c in &s.clash_points {
        if mentions(&lower, std::iter::once(&c.label).chain(&c.cues)) {
            cps.push(c.id.clone());
        }
        for d in &c.disagreements {
            let phrases = [&d.label, &d.affirmative_viewpoint, &d.negative_viewpoint].into_iter().chain(&d.cues);
            if mentions(&lower, phrases) {
                ds.push(d.id.clone());
            }
        }
    }
    (cps, ds)
}

/// Applies one block's assignment: parent closure, canonical order, and
/// the short-block rule.
pub(crate) fn apply_assignment(
    block: &mut DraftBlock,
    s: &ClashStructure,
    mut cps: Vec<ClashPointId>,
    mut ds: Vec<DisagreementId>,
    warnings: &mut Vec<AnnotationWarning>,
) {
    for d in &ds {
        if let Some(p) = s.parent_of(d) {
            cps.push(p.clone());
        }
    }
    cps.sort_by_key(|c| s.clash_position(c));
    cps.dedup();
    ds.sort_by_key(|d| s.disagreement_position(d));
    ds.dedup();
    if block.too_short_for_clash && !(cps.is_empty() && ds.is_empty()) {
        warn!(block = %block.id, "dropping clash references on a short block");
        warnings.push(AnnotationWarning::ShortBlockReferencesDropped {
            block_id: block.id.clone(),
            content_length: block.content_length,
        });
        cps.clear();
        ds.clear();
    }
    block.clash_point_ids = cps;
    block.disagreement_ids = ds;
}

pub(crate) fn parse_assignment(
    block: &BlockId,
    s: &ClashStructure,
    reply: &str,
) -> Result<(Vec<ClashPointId>, Vec<DisagreementId>), AnnotateError> {
    let id = assign_prompt_id(block);
    let r: AssignReply = parse_reply(&id, reply)?;
    let cps: Vec<ClashPointId> = r.clash_point_ids.into_iter().map(ClashPointId::new).collect();
    let ds: Vec<DisagreementId> = r.disagreement_ids.into_iter().map(DisagreementId::new).collect();
    if let Some(bad) = cps.iter().find(|c| s.clash_position(c).is_none()) {
        return Err(unparsable(&id, format!("unknown clash point {bad}")));
    }
    if let Some(bad) = ds.iter().find(|d| s.parent_of(d).is_none()) {
        return Err(unparsable(&id, format!("unknown disagreement {bad}")));
    }
    Ok((cps, ds))
}

/// Distributes clash points and disagreements to the blocks that refer to
/// them. Blocks below the short threshold keep no references.
pub fn assign_references(
    annotator: Annotator<'_>,
    blocks: &mut [DraftBlock],
    structure: &ClashStructure,
) -> Result<Vec<AnnotationWarning>, AnnotateError> {
    let mut warnings = Vec::new();
    match annotator {
        Annotator::Fallback => {
            for b in blocks.iter_mut() {
                let (cps, ds) = match_offline(b, structure);
                apply_assignment(b, structure, cps, ds, &mut warnings);
            }
        }
        Annotator::Llm(client) => {
            let reqs: Vec<LlmRequest> = blocks.iter().map(|b| assign_request(client, b, structure)).collect();
            let replies = client.call_all(&reqs);
            for (b, reply) in blocks.iter_mut().zip(replies) {
                let (cps, ds) = parse_assignment(&b.id, structure, &reply?)?;
                apply_assignment(b, structure, cps, ds, &mut warnings);
            }
        }
    }
    Ok(warnings)
}

// ---- paths ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathReply {
    path: Vec<String>,
}

pub fn path_prompt_id(d: &DisagreementId) -> String {
    format!("path/{d}")
}

pub fn path_request(client: &LlmClient, d: &AuthoredDisagreement, candidates: &[&DraftBlock]) -> LlmRequest {
    let mut user = format!(
        "Disagreement {}: {} ({} / {})\n\nCandidate blocks:\n",
        d.id, d.label, d.affirmative_viewpoint, d.negative_viewpoint
    );
    for b in candidates {
        user.push_str(&format!("[{}] {}\n", b.id, b.text));
    }
    client.request(path_prompt_id(&d.id), PATH_SYSTEM, user)
}

/// A disagreement's path: its referencing blocks in chronological order,
/// or the subset a model keeps, re-sorted. `blocks` must be chronological.
/// A disagreement with its chronological block path.
pub type DisagreementPath = (DisagreementId, Vec<BlockId>);

/// Blocks pruned from a path lose the disagreement reference; disagreements
/// no block refers to are dropped with a warning.
pub fn build_paths(
    annotator: Annotator<'_>,
    blocks: &mut [DraftBlock],
    structure: &mut ClashStructure,
) -> Result<(Vec<DisagreementPath>, Vec<AnnotationWarning>), AnnotateError> {
    let mut warnings = Vec::new();
    let mut jobs: Vec<(AuthoredDisagreement, Vec<usize>)> = Vec::new();
    for (_, d) in structure.disagreements() {
        let refs: Vec<usize> =
            blocks.iter().enumerate().filter(|(_, b)| b.disagreement_ids.contains(&d.id)).map(|(i, _)| i).collect();
        jobs.push((d.clone(), refs));
    }
    let replies: Vec<Option<String>> = match annotator {
        Annotator::Fallback => vec![None; jobs.len()],
        Annotator::Llm(client) => {
            let needs: Vec<usize> = (0..jobs.len()).filter(|&j| jobs[j].1.len() > 1).collect();
            let reqs: Vec<LlmRequest> = needs
                .iter()
                .map(|&j| {
                    let cands: Vec<&DraftBlock> = jobs[j].1.iter().map(|&i| &blocks[i]).collect();
                    path_request(client, &jobs[j].0, &cands)
                })
                .collect();
            let mut out = vec![None; jobs.len()];
            for (j, r) in needs.into_iter().zip(client.call_all(&reqs)) {
                out[j] = Some(r?);
            }
            out
        }
    };

    let mut paths = Vec::new();
    let mut dropped = Vec::new();
    for ((d, refs), reply) in jobs.into_iter().zip(replies) {
        if refs.is_empty() {
            warn!(disagreement = %d.id, "no block refers to this disagreement; dropping it");
            warnings.push(AnnotationWarning::DisagreementUnreferenced { disagreement_id: d.id.clone() });
            dropped.push(d.id);
            continue;
        }
        let keep: Vec<usize> = match reply {
            None => refs.clone(),
            Some(reply) => {
                let id = path_prompt_id(&d.id);
                let r: PathReply = parse_reply(&id, &reply)?;
                let mut keep = Vec::new();
                for b in r.path {
                    match refs.iter().find(|&&i| blocks[i].id == b.as_str()) {
                        Some(&i) => keep.push(i),
                        None => return Err(unparsable(&id, format!("{b} is not a candidate block"))),
                    }
                }
                keep.sort_unstable();
                keep.dedup();
                if keep.is_empty() {
                    return Err(unparsable(&id, "empty path"));
                }
                keep
            }
        };
        for &i in refs.iter().filter(|i| !keep.contains(i)) {
            blocks[i].disagreement_ids.retain(|x| x != &d.id);
        }
        paths.push((d.id.clone(), keep.iter().map(|&i| blocks[i].id.clone()).collect()));
    }
    for c in &mut structure.clash_points {
        c.disagreements.retain(|d| !dropped.contains(&d.id));
    }
    Ok((paths, warnings))
}
