//! Evaluation measures as explicit user models.
//!
//! Ranking-based measures (`classic`, `rbp`, `err`, `cwl`, `sdcg`) read a
//! [`Ranking`] of grades; log-based measures read an interaction log. All of
//! them are pure functions, generic over the scalar type.

mod cwl;
mod ranking;
mod sdcg;
mod session;

pub use cwl::{cwl, Continuation, CwlModel, CwlOutput};
pub use ranking::{
    average_precision, classic, dcg_at, err, ndcg_at, precision_at, rbp, Classic, Ranking,
};
pub use sdcg::sdcg;
pub use session::{session_reward_cost, simulator_expectation, Expectation, RewardCost};

use thiserror::Error;

use crate::num::Float;
use crate::Scalar;

/// Shared metric parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    /// Evaluation depth.
    pub k: usize,
    /// RBP persistence.
    pub p: Scalar,
    /// Highest relevance grade; normalizes gains to [0, 1].
    pub g_max: i32,
    /// sDCG within-query log base.
    pub b: Scalar,
    /// sDCG query-position log base; must exceed 1.
    pub bq: Scalar,
    /// Reward-cost trade-off in combined utility `R - tau * C`.
    pub tau: Scalar,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self { k: 10, p: 0.8, g_max: 3, b: 2.0, bq: 4.0, tau: 0.01 }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("non-terminating user model: continuation probability never leaves rank mass below 1e-9")]
    NonTerminating,
    #[error("invalid metric parameter: {0}")]
    InvalidParam(String),
    #[error("malformed interaction log: {0}")]
    MalformedLog(String),
}

pub(crate) fn gain<F: Float>(grade: i32, g_max: i32) -> F {
    if g_max <= 0 {
        return F::ZERO;
    }
    F::cast(grade as f64) / F::cast(g_max as f64)
}
