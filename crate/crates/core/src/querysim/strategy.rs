use super::QuerysimError;
use crate::{Lm, Query};

/// Ordered, duplicate-free terms a topic's queries are built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermPool {
    terms: Vec<String>,
}

impl TermPool {
    pub fn new(terms: Vec<String>) -> Result<Self, QuerysimError> {
        if terms.is_empty() {
            return Err(QuerysimError::InvalidSpec("term pool is empty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in &terms {
            if !seen.insert(t) {
                return Err(QuerysimError::InvalidSpec(format!("duplicate pool term `{t}`")));
            }
        }
        Ok(Self { terms })
    }

    /// Pool of the `size` most probable terms of a language model,
    /// descending, ties broken by term order.
    pub fn from_lm(lm: &Lm, size: usize) -> Result<Self, QuerysimError> {
        let mut ranked: Vec<(&str, f64)> = lm.terms().collect();
        ranked.sort_by(|(ta, pa), (tb, pb)| {
            pb.partial_cmp(pa).expect("probabilities are finite").then_with(|| ta.cmp(tb))
        });
        Self::new(ranked.into_iter().take(size).map(|(t, _)| t.to_string()).collect())
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn term(&self, idx1: usize) -> Result<String, QuerysimError> {
        self.terms
            .get(idx1 - 1)
            .cloned()
            .ok_or(QuerysimError::StrategyExhausted)
    }
}

/// The five prototypical term-level query modification strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReformulationStrategy {
    /// Replace the single term: `t1 -> t2 -> t3 -> ...`
    S1,
    /// Vary the second of two terms: `t1 t2 -> t1 t3 -> t1 t4 -> ...`
    S2,
    /// Vary the third of three terms: `t1 t2 t3 -> t1 t2 t4 -> ...`
    S3,
    /// Grow from one term: `t1 -> t1 t2 -> t1 t2 t3 -> ...`
    S4,
    /// Grow from two terms: `t1 t2 -> t1 t2 t3 -> ...`
    S5,
}

impl ReformulationStrategy {
    pub const ALL: [ReformulationStrategy; 5] = [
        ReformulationStrategy::S1,
        ReformulationStrategy::S2,
        ReformulationStrategy::S3,
        ReformulationStrategy::S4,
        ReformulationStrategy::S5,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ReformulationStrategy::S1 => "S1",
            ReformulationStrategy::S2 => "S2",
            ReformulationStrategy::S3 => "S3",
            ReformulationStrategy::S4 => "S4",
            ReformulationStrategy::S5 => "S5",
        }
    }
}

/// The query a strategy issues at `step` (1-based).
///
/// A pool too short for the requested step is `StrategyExhausted`, which the
/// session loop treats as the user running out of ideas.
pub fn reformulate(
    strategy: ReformulationStrategy,
    pool: &TermPool,
    step: usize,
) -> Result<Query, QuerysimError> {
    if step == 0 {
        return Err(QuerysimError::InvalidSpec("steps are 1-based".into()));
    }
    use ReformulationStrategy::*;
    match strategy {
        S1 => Ok(vec![pool.term(step)?]),
        S2 => Ok(vec![pool.term(1)?, pool.term(step + 1)?]),
        S3 => Ok(vec![pool.term(1)?, pool.term(2)?, pool.term(step + 2)?]),
        S4 => (1..=step).map(|i| pool.term(i)).collect(),
        S5 => (1..=step + 1).map(|i| pool.term(i)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool(n: usize) -> TermPool {
        TermPool::new((1..=n).map(|i| format!("t{i}")).collect()).unwrap()
    }

    fn q(terms: &[&str]) -> Query {
        terms.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn s1_replaces_the_single_term() {
        let p = pool(4);
        for step in 1..=4 {
            assert_eq!(reformulate(ReformulationStrategy::S1, &p, step).unwrap(), q(&[&format!("t{step}")]));
        }
    }

    #[test]
    fn s2_varies_the_second_term() {
        let p = pool(4);
        assert_eq!(reformulate(ReformulationStrategy::S2, &p, 1).unwrap(), q(&["t1", "t2"]));
        assert_eq!(reformulate(ReformulationStrategy::S2, &p, 2).unwrap(), q(&["t1", "t3"]));
        assert_eq!(reformulate(ReformulationStrategy::S2, &p, 3).unwrap(), q(&["t1", "t4"]));
    }

    #[test]
    fn s3_varies_the_third_term() {
        let p = pool(5);
        assert_eq!(reformulate(ReformulationStrategy::S3, &p, 1).unwrap(), q(&["t1", "t2", "t3"]));
        assert_eq!(reformulate(ReformulationStrategy::S3, &p, 2).unwrap(), q(&["t1", "t2", "t4"]));
        assert_eq!(reformulate(ReformulationStrategy::S3, &p, 3).unwrap(), q(&["t1", "t2", "t5"]));
    }

    #[test]
    fn s4_grows_from_one_term() {
        let p = pool(3);
        assert_eq!(reformulate(ReformulationStrategy::S4, &p, 1).unwrap(), q(&["t1"]));
        assert_eq!(reformulate(ReformulationStrategy::S4, &p, 2).unwrap(), q(&["t1", "t2"]));
        assert_eq!(reformulate(ReformulationStrategy::S4, &p, 3).unwrap(), q(&["t1", "t2", "t3"]));
    }

    #[test]
    fn s5_grows_from_two_terms() {
        let p = pool(4);
        assert_eq!(reformulate(ReformulationStrategy::S5, &p, 1).unwrap(), q(&["t1", "t2"]));
        assert_eq!(reformulate(ReformulationStrategy::S5, &p, 2).unwrap(), q(&["t1", "t2", "t3"]));
    }

    #[test]
    fn exhausted_pool_is_signalled() {
        let p = pool(3);
        assert_eq!(
            reformulate(ReformulationStrategy::S1, &p, 4).unwrap_err(),
            QuerysimError::StrategyExhausted
        );
        assert_eq!(
            reformulate(ReformulationStrategy::S2, &p, 3).unwrap_err(),
            QuerysimError::StrategyExhausted
        );
    }

    #[test]
    fn pool_rejects_duplicates() {
        assert!(TermPool::new(vec!["a".into(), "a".into()]).is_err());
        assert!(TermPool::new(vec![]).is_err());
    }
}
