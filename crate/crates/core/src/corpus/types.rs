use std::collections::BTreeMap;

use super::CorpusError;
use crate::Grade;

/// A document in the collection: unique id plus tokenized title and body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub title: Vec<String>,
    pub body: Vec<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, title: Vec<String>, body: Vec<String>) -> Self {
        Self { id: id.into(), title, body }
    }

    /// All tokens of the document, title first.
    pub fn tokens(&self) -> impl Iterator<Item = &String> {
        self.title.iter().chain(self.body.iter())
    }

    /// Document length in words, counting title and body.
    pub fn len(&self) -> usize {
        self.title.len() + self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A TREC-style information need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topic {
    pub id: String,
    pub title: Vec<String>,
    pub description: Vec<String>,
    pub narrative: Vec<String>,
}

impl Topic {
    /// Tokens describing the need: title followed by description.
    pub fn need_tokens(&self) -> impl Iterator<Item = &String> {
        self.title.iter().chain(self.description.iter())
    }
}

/// Graded relevance ground truth. Lookups of unjudged pairs return 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QrelsTable {
    grades: BTreeMap<(String, String), Grade>,
}

impl QrelsTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a judgment; a repeated (topic, doc) pair overwrites.
    pub fn insert(&mut self, topic: impl Into<String>, doc: impl Into<String>, grade: Grade) {
        self.grades.insert((topic.into(), doc.into()), grade);
    }

    /// Grade of a (topic, doc) pair; unjudged pairs are grade 0.
    pub fn grade(&self, topic: &str, doc: &str) -> Grade {
        self.grades
            .get(&(topic.to_string(), doc.to_string()))
            .copied()
            .unwrap_or(0)
    }

    /// Number of distinct judged pairs.
    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    /// Judged (doc, grade) pairs for one topic, in doc-id order.
    pub fn judged<'a>(&'a self, topic: &'a str) -> impl Iterator<Item = (&'a str, Grade)> + 'a {
        self.grades
            .range((topic.to_string(), String::new())..)
            .take_while(move |((t, _), _)| t == topic)
            .map(|((_, d), g)| (d.as_str(), *g))
    }

    /// Doc ids judged at least `min_grade` for the topic, in doc-id order.
    pub fn relevant_docs<'a>(&'a self, topic: &'a str, min_grade: Grade) -> Vec<&'a str> {
        self.judged(topic)
            .filter(|(_, g)| *g >= min_grade)
            .map(|(d, _)| d)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, Grade)> {
        self.grades.iter().map(|((t, d), g)| (t.as_str(), d.as_str(), *g))
    }
}

/// Collection-level statistics backing background models and scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectionStats {
    pub doc_count: usize,
    /// Average document length in tokens; 0 for an empty collection.
    pub avg_doc_len: f64,
    pub total_tokens: u64,
    doc_freq: BTreeMap<String, u32>,
    coll_freq: BTreeMap<String, u64>,
}

impl CollectionStats {
    pub fn from_docs(docs: &[Document]) -> Self {
        let mut doc_freq: BTreeMap<String, u32> = BTreeMap::new();
        let mut coll_freq: BTreeMap<String, u64> = BTreeMap::new();
        let mut total_tokens = 0u64;
        for doc in docs {
            let mut seen = std::collections::BTreeSet::new();
            for tok in doc.tokens() {
                *coll_freq.entry(tok.clone()).or_insert(0) += 1;
                total_tokens += 1;
                seen.insert(tok);
            }
            for tok in seen {
                *doc_freq.entry(tok.clone()).or_insert(0) += 1;
            }
        }
        let doc_count = docs.len();
        let avg_doc_len = if doc_count == 0 {
            0.0
        } else {
            total_tokens as f64 / doc_count as f64
        };
        Self { doc_count, avg_doc_len, total_tokens, doc_freq, coll_freq }
    }

    /// Number of documents containing the term.
    pub fn df(&self, term: &str) -> u32 {
        self.doc_freq.get(term).copied().unwrap_or(0)
    }

    /// Total occurrences of the term across the collection.
    pub fn cf(&self, term: &str) -> u64 {
        self.coll_freq.get(term).copied().unwrap_or(0)
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.coll_freq.keys().map(String::as_str)
    }
}

/// A document collection with the derived statistics kept alongside.
#[derive(Debug, Clone)]
pub struct Collection {
    docs: Vec<Document>,
    by_id: BTreeMap<String, usize>,
    stats: CollectionStats,
}

impl Collection {
    /// Build from documents; ids must be unique and non-empty.
    pub fn new(docs: Vec<Document>) -> Result<Self, CorpusError> {
        let mut by_id = BTreeMap::new();
        for (i, doc) in docs.iter().enumerate() {
            if doc.id.is_empty() {
                return Err(CorpusError::DocumentParse {
                    line: i + 1,
                    reason: "empty document id".into(),
                });
            }
            if by_id.insert(doc.id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateDocId(doc.id.clone()));
            }
        }
        let stats = CollectionStats::from_docs(&docs);
        Ok(Self { docs, by_id, stats })
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
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
}
