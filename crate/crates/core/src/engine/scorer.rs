use super::EngineError;
use crate::Scalar;

/// Retrieval model used to rank documents.
#[derive(Debug, Clone, PartialEq)]
pub enum ScorerSpec {
    /// `tf * ln(1 + N/df)` summed over query terms.
    TfIdf,
    /// Okapi BM25 with the usual positive idf variant.
    Bm25 { k1: Scalar, b: Scalar },
    /// Documents containing every query term, tie-broken by id.
    BooleanAnd,
    /// Deterministic pseudo-random scores keyed by seed, query, and doc id.
    Random { seed: u64 },
}

impl ScorerSpec {
    pub fn validate(&self) -> Result<(), EngineError> {
        if let ScorerSpec::Bm25 { k1, b } = self {
            if !k1.is_finite() || *k1 <= 0.0 {
                return Err(EngineError::InvalidScorer(format!("k1 must be > 0, got {k1}")));
            }
            if !(0.0..=1.0).contains(b) {
                return Err(EngineError::InvalidScorer(format!("b must be in [0,1], got {b}")));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for ScorerSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScorerSpec::TfIdf => write!(f, "tfidf"),
            ScorerSpec::Bm25 { k1, b } => write!(f, "bm25({k1},{b})"),
            ScorerSpec::BooleanAnd => write!(f, "boolean-and"),
            ScorerSpec::Random { seed } => write!(f, "random({seed})"),
        }
    }
}
