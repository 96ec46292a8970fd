use std::collections::BTreeMap;

use crate::corpus::{Document, LanguageModel};
use crate::{Lm, Query, Scalar};

/// Shape of the controlled query sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryType {
    /// One term per query.
    Single,
    /// Two terms per query.
    Pair,
    /// Query `i` takes `i` terms.
    Variable,
}

/// Deterministic query sequence from the most discriminating terms of a
/// target document set.
///
/// Terms are ranked by their relative-entropy contribution
/// `p_R(t) * ln(p_R(t)/p_C(t))`, descending; queries consume the ranked list
/// in order, never reusing a term, and generation stops once the next term's
/// score falls below `tau_rel` (or the terms run out). The first query is
/// the best one.
pub fn controlled_sequence(
    rel_docs: &[&Document],
    collection_lm: &Lm,
    query_type: QueryType,
    tau_rel: Scalar,
) -> Vec<Query> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for d in rel_docs {
        for t in d.tokens() {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    let ml: Lm = match LanguageModel::from_counts(counts) {
        Ok(lm) => lm,
        Err(_) => return Vec::new(),
    };
    let floor = 1e-12;
    let mut ranked: Vec<(String, Scalar)> = ml
        .terms()
        .map(|(t, p)| {
            let pc = collection_lm.prob(t).max(floor);
            (t.to_string(), p * (p / pc).ln())
        })
        .collect();
    ranked.sort_by(|(ta, sa), (tb, sb)| {
        sb.partial_cmp(sa).expect("scores are finite").then_with(|| ta.cmp(tb))
    });

    let eligible: Vec<String> = ranked
        .into_iter()
        .take_while(|(_, score)| *score >= tau_rel)
        .map(|(t, _)| t)
        .collect();

    let mut queries = Vec::new();
    let mut cursor = 0usize;
    let mut next_len = 1usize;
    while cursor < eligible.len() {
        let len = match query_type {
            QueryType::Single => 1,
            QueryType::Pair => 2,
            QueryType::Variable => {
                let l = next_len;
                next_len += 1;
                l
            }
        };
        let end = (cursor + len).min(eligible.len());
        queries.push(eligible[cursor..end].to_vec());
        cursor = end;
    }
    queries
}
