use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{
    ClashPointId, Competition, Debater, DebaterId, DisagreementId, SessionId, StrategyEntry, StrategyId, TurnId,
};

/// Raw debate input: sessions and turns with plain text, no blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Transcript {
    pub competition: Competition,
    pub debaters: Vec<Debater>,
    pub sessions: Vec<TranscriptSession>,
    /// Defaults to the built-in refutation catalog.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy_catalog: Option<Vec<StrategyEntry>>,
    /// Hand-authored clash structure, used when extraction runs offline.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clash_points: Vec<AuthoredClashPoint>,
    /// Replaces the built-in marker lexemes for the listed strategies.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub strategy_keywords: BTreeMap<StrategyId, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TranscriptSession {
    pub id: SessionId,
    /// Defaults to the position in the file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    pub title: String,
    pub turns: Vec<TranscriptTurn>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TranscriptTurn {
    pub id: TurnId,
    pub debater_id: DebaterId,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AuthoredClashPoint {
    pub id: ClashPointId,
    pub label: String,
    /// Extra phrases that mark a block as referencing this clash point.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cues: Vec<String>,
    #[serde(default)]
    pub disagreements: Vec<AuthoredDisagreement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AuthoredDisagreement {
    pub id: DisagreementId,
    pub label: String,
    pub affirmative_viewpoint: String,
    pub negative_viewpoint: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cues: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum TranscriptError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed transcript: {0}")]
    Malformed(#[from] serde_json::Error),
}

impl Transcript {
    pub fn parse(bytes: &[u8]) -> Result<Self, TranscriptError> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TranscriptError> {
        let path = path.as_ref();
        let bytes =
            std::fs::read(path).map_err(|source| TranscriptError::Io { path: path.display().to_string(), source })?;
        Self::parse(&bytes)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("transcript serializes");
        s.push('\n');
        s
    }
}
