use std::collections::{BTreeMap, BTreeSet};

use super::BehaviorError;
use crate::corpus::{CollectionStats, Document, LanguageModel};
use crate::num::Float;

/// Expand topic terms into a background-knowledge model using document-level
/// co-occurrence.
///
/// Candidate terms are ranked by pointwise mutual information with the topic:
/// `PMI(t) = ln(co(t) * N / (df(t) * |D_T|))` where `D_T` are the documents
/// containing at least one topic term and `co(t)` counts those containing
/// `t`. The model weights the top `k_exp` candidates by the PMI lift ratio;
/// ties break toward higher co-occurrence. With `k_exp = 0` or no
/// co-occurring terms, the topic terms themselves form the model.
pub fn expand_background<F: Float>(
    topic_terms: &[String],
    docs: &[Document],
    stats: &CollectionStats,
    k_exp: usize,
) -> Result<LanguageModel<F>, BehaviorError> {
    let topic_set: BTreeSet<&String> = topic_terms.iter().collect();
    if topic_set.is_empty() {
        return Err(BehaviorError::Corpus(crate::corpus::CorpusError::NoProbabilityMass));
    }
    let topic_ml = || {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for t in topic_terms {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
        Ok(LanguageModel::from_counts(counts)?)
    };
    if k_exp == 0 {
        return topic_ml();
    }

    let topic_docs: Vec<&Document> = docs
        .iter()
        .filter(|d| d.tokens().any(|t| topic_set.contains(t)))
        .collect();
    if topic_docs.is_empty() {
        return Ok(LanguageModel::uniform(topic_set.iter().map(|s| s.as_str()))?);
    }

    let mut co: BTreeMap<&String, usize> = BTreeMap::new();
    for doc in &topic_docs {
        let uniq: BTreeSet<&String> = doc.tokens().collect();
        for tok in uniq {
            if !topic_set.contains(tok) {
                *co.entry(tok).or_insert(0) += 1;
            }
        }
    }
    if co.is_empty() {
        return Ok(LanguageModel::uniform(topic_set.iter().map(|s| s.as_str()))?);
    }

    let n = stats.doc_count as f64;
    let dt = topic_docs.len() as f64;
    let mut scored: Vec<(&String, f64, usize)> = co
        .into_iter()
        .map(|(t, c)| {
            let df = stats.df(t).max(1) as f64;
            let lift = c as f64 * n / (df * dt);
            (t, lift, c)
        })
        .collect();
    scored.sort_by(|(ta, la, ca), (tb, lb, cb)| {
        lb.partial_cmp(la)
            .expect("lift is finite")
            .then_with(|| cb.cmp(ca))
            .then_with(|| ta.cmp(tb))
    });
    scored.truncate(k_exp);

    let weights: BTreeMap<String, F> = scored
        .into_iter()
        .map(|(t, lift, _)| (t.clone(), F::cast(lift)))
        .collect();
    Ok(LanguageModel::normalized(weights)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;

    fn doc(id: &str, body: &str) -> Document {
        Document::new(id, vec![], tokenize(body))
    }

    fn fixture() -> Vec<Document> {
        vec![
            doc("d1", "space mirror"),
            doc("d2", "space mirror"),
            doc("d3", "space mirror rock"),
            doc("d4", "rock dust lens"),
        ]
    }

    #[test]
    fn exclusive_co_occurrence_wins() {
        // "mirror" appears in every topic doc and nowhere else; "rock" leaks
        // outside the topic docs.
        let docs = fixture();
        let stats = CollectionStats::from_docs(&docs);
        let topic = vec!["space".to_string()];
        let bg = expand_background::<f64>(&topic, &docs, &stats, 2).unwrap();
        let mut terms: Vec<(&str, f64)> = bg.terms().collect();
        terms.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        assert_eq!(terms[0].0, "mirror");
        assert!(bg.prob("mirror") > bg.prob("rock"));
    }

    #[test]
    fn k_zero_falls_back_to_topic_model() {
        let docs = fixture();
        let stats = CollectionStats::from_docs(&docs);
        let topic = vec!["space".to_string(), "space".to_string(), "probe".to_string()];
        let bg = expand_background::<f64>(&topic, &docs, &stats, 0).unwrap();
        assert!((bg.prob("space") - 2.0 / 3.0).abs() < 1e-12);
        assert!((bg.prob("probe") - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn no_co_occurrence_gives_uniform_topic_terms() {
        let docs = vec![doc("d1", "space"), doc("d2", "rock")];
        let stats = CollectionStats::from_docs(&docs);
        let topic = vec!["space".to_string()];
        let bg = expand_background::<f64>(&topic, &docs, &stats, 5).unwrap();
        assert_eq!(bg.prob("space"), 1.0);
    }

    #[test]
    fn output_is_normalized() {
        let docs = fixture();
        let stats = CollectionStats::from_docs(&docs);
        let topic = vec!["space".to_string()];
        let bg = expand_background::<f64>(&topic, &docs, &stats, 3).unwrap();
        assert!(bg.is_normalized());
    }
}
