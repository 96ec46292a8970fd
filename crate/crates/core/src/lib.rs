//! Simulated users for evaluating interactive information access systems.
//!
//! The crate is organized around the lifecycle of a simulated search or
//! dialogue session:
//!
//! - [`corpus`]: test collections (documents, topics, qrels) and unigram
//!   language-model utilities shared by everything else.
//! - [`engine`]: small embedded retrieval systems (inverted index, scorers,
//!   SERP/snippet construction) so experiments need no external services.
//! - [`querysim`]: initial-query and reformulation models, from generative
//!   sampling to optimization-based query selection.
//! - [`behavior`]: per-decision user models (SERP entry, scanning, clicking,
//!   judging, stopping, action costs).
//! - [`session`]: the search-session loop tying the above together into an
//!   append-only interaction log.
//! - [`dialogue`]: agenda-based task-oriented dialogue users and the
//!   subtopic-MDP conversational-search user.
//! - [`measures`]: evaluation measures as explicit user models, computed from
//!   rankings or from interaction logs.
//!
//! Numeric code is generic over the scalar type via [`num::Float`]; the
//! concrete aliases below fix the precision used by the simulators.

pub mod behavior;
pub mod corpus;
pub mod dialogue;
pub mod engine;
pub mod hash;
pub mod measures;
pub mod num;
pub mod querysim;
pub mod session;

/// Scalar type used by the simulators and the default metric instantiations.
pub type Scalar = f64;

/// Relevance grade as carried by qrels and snippets.
pub type Grade = i32;

/// A query is a sequence of lowercase tokens.
pub type Query = Vec<String>;

/// Concrete language model over [`Scalar`] probabilities.
pub type Lm = corpus::LanguageModel<Scalar>;
