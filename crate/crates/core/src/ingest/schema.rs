use serde::{Deserialize, Serialize};

use crate::model::{
    BlockId, ClashPointId, Competition, ContentMetric, Debater, DebaterId, DisagreementId, SentenceRange, SessionId,
    StrategyEntry, StrategyTag, TurnId,
};

/// Top-level corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CorpusDocument {
    pub competition: Competition,
    pub content_metric: ContentMetric,
    pub debaters: Vec<Debater>,
    pub sessions: Vec<SessionDoc>,
    pub clash_points: Vec<ClashPointDoc>,
    pub strategy_catalog: Vec<StrategyEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SessionDoc {
    pub id: SessionId,
    pub index: u32,
    pub title: String,
    pub turns: Vec<TurnDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TurnDoc {
    pub id: TurnId,
    pub debater_id: DebaterId,
    pub blocks: Vec<BlockDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BlockDoc {
    pub id: BlockId,
    pub text: String,
    /// Informational; recomputed from `text` on ingest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence_spans: Option<Vec<SentenceRange>>,
    pub strategy_tags: Vec<StrategyTag>,
    pub clash_point_ids: Vec<ClashPointId>,
    pub disagreement_ids: Vec<DisagreementId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ClashPointDoc {
    pub id: ClashPointId,
    pub label: String,
    pub disagreements: Vec<DisagreementDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DisagreementDoc {
    pub id: DisagreementId,
    pub label: String,
    pub affirmative_viewpoint: String,
    pub negative_viewpoint: String,
    pub path: Vec<BlockId>,
}
