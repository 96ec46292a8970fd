//! Experiment runner and validation harness.
//!
//! Wires corpora, systems, and user presets from a config file into
//! deterministic sweeps, scores the resulting logs, audits simulators with
//! system-pair testers, and compares behavioural statistics against
//! reference distributions.

pub mod config;
pub mod metric;
pub mod sweep;
pub mod synth;
pub mod tester;
pub mod validate;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("unresolved {kind} preset `{name}`")]
    Unresolved { kind: &'static str, name: String },
    #[error(transparent)]
    Corpus(#[from] simseek_core::corpus::CorpusError),
    #[error(transparent)]
    Engine(#[from] simseek_core::engine::EngineError),
    #[error(transparent)]
    Session(#[from] simseek_core::session::SessionError),
    #[error(transparent)]
    Measure(#[from] simseek_core::measures::MeasureError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
