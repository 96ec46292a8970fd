use std::collections::BTreeMap;

use super::judge::{build_relevance_model, relevance_score_tokens, RelevanceModelWeights};
use super::BehaviorError;
use crate::corpus::{Document, LanguageModel};
use crate::{Lm, Scalar};

/// The evolving knowledge of one simulated user within a session.
///
/// Holds the static topic, background, and collection models plus the
/// interaction model over relevant documents seen so far; the latter is
/// re-estimated by maximum likelihood over pooled counts after every
/// relevant judgment.
#[derive(Debug, Clone)]
pub struct KnowledgeState {
    topic: Lm,
    background: Lm,
    collection: Lm,
    weights: RelevanceModelWeights,
    rel_doc_counts: BTreeMap<String, usize>,
    rel_doc_ids: std::collections::BTreeSet<String>,
    seen_snippets: Vec<Vec<String>>,
}

impl KnowledgeState {
    pub fn new(topic: Lm, background: Lm, collection: Lm, weights: RelevanceModelWeights) -> Self {
        Self {
            topic,
            background,
            collection,
            weights,
            rel_doc_counts: BTreeMap::new(),
            rel_doc_ids: std::collections::BTreeSet::new(),
            seen_snippets: Vec::new(),
        }
    }

    pub fn topic_lm(&self) -> &Lm {
        &self.topic
    }

    pub fn background_lm(&self) -> &Lm {
        &self.background
    }

    pub fn collection_lm(&self) -> &Lm {
        &self.collection
    }

    pub fn weights(&self) -> &RelevanceModelWeights {
        &self.weights
    }

    /// Distinct documents judged relevant so far.
    pub fn rel_docs_found(&self) -> usize {
        self.rel_doc_ids.len()
    }

    /// Has this document already been judged relevant in the session?
    pub fn knows_relevant(&self, doc_id: &str) -> bool {
        self.rel_doc_ids.contains(doc_id)
    }

    pub fn seen_snippets(&self) -> &[Vec<String>] {
        &self.seen_snippets
    }

    /// Remember an examined snippet's text.
    pub fn observe_snippet(&mut self, tokens: Vec<String>) {
        self.seen_snippets.push(tokens);
    }

    /// Fold a document judged relevant into the interaction model.
    ///
    /// Re-finding a document the user already judged changes nothing;
    /// returns whether the document was new.
    pub fn add_relevant_doc(&mut self, doc: &Document) -> bool {
        if !self.rel_doc_ids.insert(doc.id.clone()) {
            return false;
        }
        for tok in doc.tokens() {
            *self.rel_doc_counts.entry(tok.clone()).or_insert(0) += 1;
        }
        true
    }

    /// Maximum-likelihood model over all relevant documents seen; `None`
    /// before the first one.
    pub fn rel_doc_lm(&self) -> Option<Lm> {
        if self.rel_doc_counts.is_empty() {
            return None;
        }
        LanguageModel::from_counts(
            self.rel_doc_counts.iter().map(|(t, n)| (t.as_str(), *n)),
        )
        .ok()
    }

    /// The current relevance model. Until a relevant document has been seen
    /// the interaction component carries no weight.
    pub fn relevance_model(&self) -> Result<Lm, BehaviorError> {
        match self.rel_doc_lm() {
            Some(rd) => build_relevance_model(
                &self.topic,
                &rd,
                &self.background,
                &self.collection,
                &self.weights,
            ),
            None => {
                let w = RelevanceModelWeights { w_interaction: 0.0, ..self.weights };
                build_relevance_model(
                    &self.topic,
                    &self.topic,
                    &self.background,
                    &self.collection,
                    &w,
                )
            }
        }
    }

    /// Normalized log-likelihood of a text under the current relevance model.
    pub fn score_text(&self, tokens: &[String]) -> Result<Scalar, BehaviorError> {
        let relevance = self.relevance_model()?;
        relevance_score_tokens(tokens, &relevance, &self.collection)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use approx::assert_abs_diff_eq;

    fn knowledge() -> KnowledgeState {
        let topic = LanguageModel::uniform(["a", "b"]).unwrap();
        let coll = LanguageModel::uniform(["a", "b", "c"]).unwrap();
        KnowledgeState::new(topic.clone(), topic, coll, RelevanceModelWeights::default())
    }

    #[test]
    fn first_relevant_doc_sets_ml_model() {
        let mut k = knowledge();
        assert!(k.rel_doc_lm().is_none());
        k.add_relevant_doc(&Document::new("d1", vec![], tokenize("a a b")));
        let rd = k.rel_doc_lm().unwrap();
        assert_abs_diff_eq!(rd.prob("a"), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rd.prob("b"), 1.0 / 3.0, epsilon = 1e-12);
        assert_eq!(k.rel_docs_found(), 1);
    }

    #[test]
    fn second_doc_pools_counts() {
        let mut k = knowledge();
        k.add_relevant_doc(&Document::new("d1", vec![], tokenize("a a b")));
        k.add_relevant_doc(&Document::new("d2", vec![], tokenize("b")));
        let rd = k.rel_doc_lm().unwrap();
        assert_abs_diff_eq!(rd.prob("a"), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rd.prob("b"), 0.5, epsilon = 1e-12);
        assert!(rd.is_normalized());
    }

    #[test]
    fn relevance_model_exists_before_any_interaction() {
        let k = knowledge();
        let r = k.relevance_model().unwrap();
        assert!(r.is_normalized());
        assert!(r.prob("a") > r.prob("c"));
    }
}
