//! Model-based conversational user simulators.
//!
//! The centerpiece is the agenda-based task-oriented dialogue user: a goal of
//! constraints and requests, a stack of pending dialogue acts, handcrafted
//! push rules reacting to system acts, and template realization. A separate
//! subtopic Markov chain with a persistence model covers conversational
//! search.

mod acts;
mod agenda;
mod goal;
mod interaction;
mod nlg;
mod prefs;
mod run;
mod subtopic;

pub use acts::{DialogueAct, Intent, SlotValue};
pub use agenda::{init_agenda, receive_system_act, Agenda, UpdateRules};
pub use goal::{sample_goal, Goal, Ontology, OntologySlot};
pub use interaction::{check_expected, InteractionModel};
pub use nlg::{realize, TemplateSet};
pub use prefs::PreferenceStore;
pub use run::{
    cooperative_system, corpus_stats, run_dialogue, DialogueLog, DialogueStats, DialogueTurn,
    SimulatorConfig, Speaker,
};
pub use subtopic::{
    continue_querying, subtopic_step, PersistenceParams, SubtopicState, TransitionTable,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DialogueError {
    #[error("invalid dialogue act: {0}")]
    InvalidAct(String),
    #[error("slot `{0}` appears in both constraints and requests")]
    SlotOverlap(String),
    #[error("ontology has {available} usable slots, goal needs {needed}")]
    InsufficientSlots { needed: usize, available: usize },
    #[error("top acts have different intents and cannot be merged")]
    UnmergeableActs,
    #[error("agenda is empty")]
    EmptyAgenda,
    #[error("intent `{0}` is not part of the interaction model")]
    UnknownIntent(String),
    #[error("no template matches intent `{0}`")]
    MissingTemplate(String),
    #[error("invalid transition table: {0}")]
    InvalidTable(String),
    #[error("preference {0} outside [-1, 1]")]
    PrefRange(f64),
    #[error("interaction model: intent `{0}` unreachable from the start intent")]
    UnreachableIntent(String),
    #[error("system returned a malformed act: {0}")]
    MalformedSystemAct(String),
}
