use std::collections::BTreeMap;

use super::EngineError;
use crate::corpus::{CollectionStats, Document};

/// Inverted index over a document collection.
///
/// Postings are sorted by ascending doc id; the collection statistics are
/// computed once at build time. Immutable after construction, so concurrent
/// searches are safe.
#[derive(Debug, Clone)]
pub struct Index {
    docs: Vec<Document>,
    by_id: BTreeMap<String, usize>,
    postings: BTreeMap<String, Vec<(usize, u32)>>,
    stats: CollectionStats,
}

/// Build an index; document ids must be unique and non-empty.
pub fn build_index(docs: Vec<Document>) -> Result<Index, EngineError> {
    let mut by_id = BTreeMap::new();
    for (i, doc) in docs.iter().enumerate() {
        if doc.id.is_empty() {
            return Err(EngineError::EmptyDocId(i));
        }
        if by_id.insert(doc.id.clone(), i).is_some() {
            return Err(EngineError::DuplicateDocId(doc.id.clone()));
        }
    }
    let stats = CollectionStats::from_docs(&docs);
    let mut postings: BTreeMap<String, Vec<(usize, u32)>> = BTreeMap::new();
    // Iterating in id order keeps every postings list sorted by doc id.
    for &idx in by_id.values() {
        let mut tf: BTreeMap<&String, u32> = BTreeMap::new();
        for tok in docs[idx].tokens() {
            *tf.entry(tok).or_insert(0) += 1;
        }
        for (tok, n) in tf {
            postings.entry(tok.clone()).or_default().push((idx, n));
        }
    }
    Ok(Index { docs, by_id, postings, stats })
}

impl Index {
    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn doc(&self, id: &str) -> Option<&Document> {
        self.by_id.get(id).map(|&i| &self.docs[i])
    }

    pub fn stats(&self) -> &CollectionStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Postings list for a term: (doc index, term frequency) by doc id.
    pub fn postings(&self, term: &str) -> &[(usize, u32)] {
        self.postings.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Term frequency of `term` in the document at `doc_idx`.
    pub fn tf(&self, term: &str, doc_idx: usize) -> u32 {
        self.postings(term)
            .iter()
            .find(|(d, _)| *d == doc_idx)
            .map(|(_, n)| *n)
            .unwrap_or(0)
    }

    /// Doc indices in ascending doc-id order.
    pub(crate) fn idx_by_id(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_id.values().copied()
    }
}
