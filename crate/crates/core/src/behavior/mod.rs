//! Per-decision user models: SERP entry, scanning, clicking, judging,
//! stopping, and action costs.
//!
//! Every model here is a small pure function of its inputs plus an explicit
//! RNG stream, so whole sessions replay bit-for-bit under a fixed seed.

mod background;
mod click;
mod cost;
mod judge;
mod knowledge;
mod scan;
mod scent;
mod stop;

pub use background::expand_background;
pub use click::{click_prob, ClickModel, GradeProbTable, PositionCurve};
pub use cost::{action_cost, Action, CostModel};
pub use judge::{
    build_relevance_model, judge_prob, relevance_score, relevance_score_tokens, JudgeInput,
    JudgeModel, RelevanceModelWeights,
};
pub use knowledge::KnowledgeState;
pub use scan::{examine_next, BrowseState, ScanModel};
pub use scent::{serp_entry_decision, serp_scent, ScentModel};
pub use stop::{
    session_continue, stop_decision, AbandonReason, QueryState, QueryStop, SessionCounters,
    SessionStop, SessionVerdict, SimilarityMetric, StopPolicy, StopReason, StopVerdict,
};

use thiserror::Error;

use crate::corpus::CorpusError;

#[derive(Debug, Error, PartialEq)]
pub enum BehaviorError {
    #[error("snippets must be examined in rank order: expected {expected}, got {got}")]
    OutOfOrderRank { expected: usize, got: usize },
    #[error("click model requires a snippet grade but none is set")]
    MissingSnippetGrade,
    #[error("judge model got a mismatched input: {0}")]
    InputMismatch(&'static str),
    #[error("relevance model weights sum to zero")]
    ZeroWeightSum,
    #[error("cannot score an empty document")]
    EmptyDocument,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}
