//! Query generation: initial queries and reformulations.
//!
//! Four families, matching how simulated searchers are usually configured:
//! generative sampling for known-item and ad hoc queries, deterministic
//! discriminative sequences, the five prototypical term-level reformulation
//! strategies, and optimization-based selection among candidate queries.

mod adhoc;
mod controlled;
mod known_item;
mod pre;
mod strategy;

pub use adhoc::{adhoc_pmf, gen_adhoc, AdhocSpec, TopicSource};
pub use controlled::{controlled_sequence, QueryType};
pub use known_item::{
    gen_known_item, query_for_doc, sample_target, DocPrior, KnownItemSpec, LengthPmf, TermModel,
};
pub use pre::{match_prob, pre_select_query, EffortModel, MatchKnowledge, PreParams};
pub use strategy::{reformulate, ReformulationStrategy, TermPool};

use thiserror::Error;

use crate::corpus::CorpusError;

#[derive(Debug, Error, PartialEq)]
pub enum QuerysimError {
    #[error("cannot sample queries from an empty collection")]
    EmptyCollection,
    #[error("sampled documents had empty vocabularies {0} times in a row")]
    EmptyVocabulary(usize),
    #[error("reformulation strategy has run out of terms")]
    StrategyExhausted,
    #[error("no candidate queries to select from")]
    EmptyCandidates,
    #[error("invalid query spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}
