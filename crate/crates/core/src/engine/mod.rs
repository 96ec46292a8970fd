//! Embedded toy retrieval systems: the systems under evaluation.
//!
//! Deliberately small and fully deterministic, so that every experiment is
//! reproducible without external services. Degraded scorer variants (random,
//! boolean) exist to build testers, not to be good rankers.

mod index;
mod scorer;
mod serp;

pub use index::{build_index, Index};
pub use scorer::ScorerSpec;
pub use serp::{make_snippet, search, Serp, Snippet, SnippetMode, DEFAULT_SNIPPET_WINDOW};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("duplicate document id `{0}`")]
    DuplicateDocId(String),
    #[error("empty document id at position {0}")]
    EmptyDocId(usize),
    #[error("invalid scorer: {0}")]
    InvalidScorer(String),
    #[error("page size k must be >= 1")]
    InvalidPageSize,
}
