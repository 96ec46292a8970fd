//! Test collections and the unigram language-model utilities built on them.

mod lm;
mod parse;
mod tokenize;
mod types;

pub use lm::{build_lm, js_divergence, kl_divergence, LanguageModel, LmSampler, Smoothing};
pub use parse::{
    parse_documents, parse_qrels, parse_trec_topics, serialize_qrels, serialize_topics,
};
pub use tokenize::tokenize;
pub use types::{Collection, CollectionStats, Document, QrelsTable, Topic};

use thiserror::Error;

/// Errors produced while ingesting collections or building language models.
#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("malformed topic record at byte {offset}: missing <{field}>")]
    TopicParse { offset: usize, field: &'static str },
    #[error("qrels line {line}: {reason}")]
    QrelsParse { line: usize, reason: String },
    #[error("documents line {line}: {reason}")]
    DocumentParse { line: usize, reason: String },
    #[error("duplicate document id `{0}`")]
    DuplicateDocId(String),
    #[error("no probability mass: empty input with no smoothing to supply it")]
    NoProbabilityMass,
    #[error("KL divergence undefined: q(\"{term}\") = 0 while p(\"{term}\") > 0")]
    KlDomain { term: String },
}
