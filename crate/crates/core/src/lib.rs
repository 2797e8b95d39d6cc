//! Engine behind the conch debate visual-analytics views.
//!
//! The crate turns a structured competitive-debate corpus into geometry for
//! three coordinated views: a multi-spiral process view with a chord
//! diagram of clash-point interactions, an augmented stacked-bar strategy
//! view, and a content view of block cards. It also ships the annotation
//! pipeline that produces such corpora and the agreement metrics used to
//! validate it.
//!
//! Module map:
//! - [`model`]: data model and validation
//! - [`ingest`]: corpus file format, content lengths, statistics
//! - [`annotate`]: segmentation / labeling / extraction pipeline and metrics
//! - [`analytics`]: interactions, shares, strategy usage, co-occurrence
//! - [`layout`]: process-view and strategy-view geometry
//! - [`scene`]: renderer-agnostic scene graph, SVG output, content cards
//! - [`synth`]: seeded synthetic corpora for demos, tests and benchmarks

pub mod analytics;
pub mod annotate;
pub mod ingest;
pub mod layout;
pub mod model;
pub mod scene;
pub mod synth;
pub mod text;

pub use model::{
    validate_corpus, Block, BlockId, ClashPoint, ClashPointId, DebateCorpus, Debater, DebaterId, Disagreement,
    DisagreementId, Session, SessionId, Side, StrategyCatalog, StrategyId, Turn, TurnId, ValidationReport,
};
