//! The search-session loop: one simulated user, one topic, one system,
//! one append-only interaction log.

mod log;
mod profile;
mod run;

pub use log::{log_summary, Event, EventKind, InteractionLog, SessionSummary};
pub use profile::{GradeSource, KnowledgeConfig, QuerySpec, UserProfile};
pub use run::{run_session, SessionState, SystemUnderTest};

use thiserror::Error;

use crate::behavior::BehaviorError;
use crate::corpus::CorpusError;
use crate::querysim::QuerysimError;

#[derive(Debug, Error, PartialEq)]
pub enum SessionError {
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
    #[error(transparent)]
    Querysim(#[from] QuerysimError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("malformed log at event {index}: {reason}")]
    MalformedLog { index: usize, reason: String },
    #[error("log line {line}: {reason}")]
    LogParse { line: usize, reason: String },
}
