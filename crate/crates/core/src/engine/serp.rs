use std::collections::BTreeSet;

use super::index::Index;
use super::scorer::ScorerSpec;
use crate::corpus::Document;
use crate::hash::Fnv1a;
use crate::{Grade, Query, Scalar};

/// Default excerpt window in tokens.
pub const DEFAULT_SNIPPET_WINDOW: usize = 10;

/// How snippet relevance is exposed to the simulated user.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnippetMode {
    /// The snippet carries the qrels grade of its document.
    Perfect,
    /// The grade is left unset; it is judged from the excerpt text downstream.
    Textual,
}

/// Preview of one result: title plus a short excerpt.
#[derive(Debug, Clone, PartialEq)]
pub struct Snippet {
    pub doc_id: String,
    /// 1-based rank; assigned when the snippet is placed in a SERP.
    pub rank: usize,
    pub title: Vec<String>,
    pub excerpt: Vec<String>,
    /// Mode-dependent: qrels grade under [`SnippetMode::Perfect`], otherwise
    /// filled in by whoever judges the snippet text.
    pub grade: Option<Grade>,
}

impl Snippet {
    /// Tokens a user sees when examining the snippet.
    pub fn tokens(&self) -> impl Iterator<Item = &String> {
        self.title.iter().chain(self.excerpt.iter())
    }
}

/// A search engine results page.
#[derive(Debug, Clone, PartialEq)]
pub struct Serp {
    pub query: Query,
    pub snippets: Vec<Snippet>,
    pub k: usize,
}

impl Serp {
    pub fn is_empty(&self) -> bool {
        self.snippets.is_empty()
    }

    /// Set every snippet grade from a lookup on its doc id.
    pub fn with_grades(mut self, grade_of: impl Fn(&str) -> Grade) -> Self {
        for s in &mut self.snippets {
            s.grade = Some(grade_of(&s.doc_id));
        }
        self
    }
}

/// Build a snippet for one document.
///
/// The excerpt is a window of `w` tokens centered on the first query-term
/// occurrence in the body, falling back to the body prefix when no query term
/// occurs. Free-standing snippets get rank 1 until placed in a SERP.
pub fn make_snippet(
    doc: &Document,
    query: &Query,
    w: usize,
    mode: SnippetMode,
    grade: Grade,
) -> Snippet {
    let w = w.max(1);
    let body = &doc.body;
    let qset: BTreeSet<&String> = query.iter().collect();
    let pos = body.iter().position(|t| qset.contains(t)).unwrap_or(0);
    let start = pos.saturating_sub((w - 1) / 2).min(body.len().saturating_sub(w));
    let end = (start + w).min(body.len());
    Snippet {
        doc_id: doc.id.clone(),
        rank: 1,
        title: doc.title.clone(),
        excerpt: body[start..end].to_vec(),
        grade: match mode {
            SnippetMode::Perfect => Some(grade),
            SnippetMode::Textual => None,
        },
    }
}

/// Rank the top-`k` documents for a query.
///
/// A pure function of its arguments: scores are deterministic (the random
/// scorer is keyed by its seed and the query), ties break by ascending doc
/// id, and snippets are built textual with the default window. An empty
/// result list is a valid SERP.
pub fn search(index: &Index, query: &Query, scorer: &ScorerSpec, k: usize) -> Serp {
    let k = k.max(1);
    let mut scored: Vec<(usize, Scalar)> = match scorer {
        ScorerSpec::TfIdf => score_tfidf(index, query),
        ScorerSpec::Bm25 { k1, b } => score_bm25(index, query, *k1, *b),
        ScorerSpec::BooleanAnd => score_boolean(index, query),
        ScorerSpec::Random { seed } => score_random(index, query, *seed),
    };
    scored.sort_by(|(ia, sa), (ib, sb)| {
        sb.partial_cmp(sa)
            .expect("scores are finite")
            .then_with(|| index.docs()[*ia].id.cmp(&index.docs()[*ib].id))
    });
    scored.truncate(k);

    let snippets = scored
        .iter()
        .enumerate()
        .map(|(i, (idx, _))| {
            let mut s = make_snippet(
                &index.docs()[*idx],
                query,
                DEFAULT_SNIPPET_WINDOW,
                SnippetMode::Textual,
                0,
            );
            s.rank = i + 1;
            s
        })
        .collect();
    Serp { query: query.clone(), snippets, k }
}

fn score_tfidf(index: &Index, query: &Query) -> Vec<(usize, Scalar)> {
    let n = index.stats().doc_count as Scalar;
    let mut acc: Vec<(usize, Scalar)> = Vec::new();
    for term in query {
        let df = index.stats().df(term) as Scalar;
        if df == 0.0 {
            continue;
        }
        let idf = (1.0 + n / df).ln();
        for &(doc_idx, tf) in index.postings(term) {
            upsert(&mut acc, doc_idx, tf as Scalar * idf);
        }
    }
    acc
}

fn score_bm25(index: &Index, query: &Query, k1: Scalar, b: Scalar) -> Vec<(usize, Scalar)> {
    let n = index.stats().doc_count as Scalar;
    let avgdl = index.stats().avg_doc_len.max(1e-9);
    let mut acc: Vec<(usize, Scalar)> = Vec::new();
    for term in query {
        let df = index.stats().df(term) as Scalar;
        if df == 0.0 {
            continue;
        }
        let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
        for &(doc_idx, tf) in index.postings(term) {
            let tf = tf as Scalar;
            let dl = index.docs()[doc_idx].len() as Scalar;
            let norm = tf + k1 * (1.0 - b + b * dl / avgdl);
            upsert(&mut acc, doc_idx, idf * tf * (k1 + 1.0) / norm);
        }
    }
    acc
}

fn score_boolean(index: &Index, query: &Query) -> Vec<(usize, Scalar)> {
    let terms: BTreeSet<&String> = query.iter().collect();
    if terms.is_empty() {
        return Vec::new();
    }
    let mut matching: Option<BTreeSet<usize>> = None;
    for term in &terms {
        let docs: BTreeSet<usize> = index.postings(term).iter().map(|(d, _)| *d).collect();
        matching = Some(match matching {
            None => docs,
            Some(prev) => prev.intersection(&docs).copied().collect(),
        });
        if matching.as_ref().is_some_and(BTreeSet::is_empty) {
            return Vec::new();
        }
    }
    matching
        .unwrap_or_default()
        .into_iter()
        .map(|d| (d, 1.0))
        .collect()
}

fn score_random(index: &Index, query: &Query, seed: u64) -> Vec<(usize, Scalar)> {
    let mut qh = Fnv1a::new();
    qh.write_u64(seed);
    for t in query {
        qh.write_str(t);
    }
    let qhash = qh.finish();
    index
        .idx_by_id()
        .map(|doc_idx| {
            let mut h = Fnv1a::new();
            h.write_u64(qhash).write_str(&index.docs()[doc_idx].id);
            // Map the hash onto [0, 1).
            let score = (finalize(h.finish()) >> 11) as Scalar / (1u64 << 53) as Scalar;
            (doc_idx, score)
        })
        .collect()
}

// splitmix64 finalizer; FNV alone diffuses the last bytes poorly.
fn finalize(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn upsert(acc: &mut Vec<(usize, Scalar)>, doc_idx: usize, add: Scalar) {
    match acc.iter_mut().find(|(d, _)| *d == doc_idx) {
        Some((_, s)) => *s += add,
        None => acc.push((doc_idx, add)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use crate::engine::build_index;

    fn doc(id: &str, body: &str) -> Document {
        Document::new(id, vec![], tokenize(body))
    }

    fn q(s: &str) -> Query {
        tokenize(s)
    }

    #[test]
    fn single_doc_match_ranks_first() {
        let idx = build_index(vec![doc("d1", "hubble telescope data")]).unwrap();
        let serp = search(&idx, &q("telescope"), &ScorerSpec::TfIdf, 10);
        assert_eq!(serp.snippets.len(), 1);
        assert_eq!(serp.snippets[0].doc_id, "d1");
        assert_eq!(serp.snippets[0].rank, 1);
    }

    #[test]
    fn empty_collection_empty_serp() {
        let idx = build_index(vec![]).unwrap();
        let serp = search(&idx, &q("anything"), &ScorerSpec::TfIdf, 5);
        assert!(serp.is_empty());
    }

    #[test]
    fn boolean_and_requires_all_terms() {
        let idx = build_index(vec![doc("d1", "a b"), doc("d2", "a")]).unwrap();
        let both = search(&idx, &q("a b"), &ScorerSpec::BooleanAnd, 5);
        assert_eq!(both.snippets.len(), 1);
        assert_eq!(both.snippets[0].doc_id, "d1");
        let missing = search(&idx, &q("a z"), &ScorerSpec::BooleanAnd, 5);
        assert!(missing.is_empty());
    }

    #[test]
    fn bm25_hand_computed_ordering() {
        // d1: tf(x)=3 in a short doc; d2: tf(x)=1; d3: no x but has y.
        // For the query "x", idf is shared, so ordering follows the
        // tf/length normalization: d1 > d2, d3 absent.
        let idx = build_index(vec![
            doc("d1", "x x x y"),
            doc("d2", "x y y y"),
            doc("d3", "y y y y"),
        ])
        .unwrap();
        let serp = search(&idx, &q("x"), &ScorerSpec::Bm25 { k1: 1.2, b: 0.75 }, 10);
        let ids: Vec<&str> = serp.snippets.iter().map(|s| s.doc_id.as_str()).collect();
        assert_eq!(ids, vec!["d1", "d2"]);

        // Cross-check d1's score against the formula evaluated by hand:
        // idf = ln(1 + (3 - 2 + 0.5)/(2 + 0.5)) = ln(1.6)
        // norm = 3 + 1.2*(1 - 0.75 + 0.75*4/4) = 4.2
        // score = idf * 3 * 2.2 / 4.2
        let expected = (1.6f64).ln() * 3.0 * 2.2 / 4.2;
        let got = score_bm25(&idx, &q("x"), 1.2, 0.75)
            .into_iter()
            .find(|(d, _)| *d == 0)
            .unwrap()
            .1;
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn ties_break_by_ascending_doc_id() {
        let idx = build_index(vec![doc("b", "x"), doc("a", "x"), doc("c", "x")]).unwrap();
        let serp = search(&idx, &q("x"), &ScorerSpec::BooleanAnd, 10);
        let ids: Vec<&str> = serp.snippets.iter().map(|s| s.doc_id.as_str()).collect();
        assert_eq!(ids, vec!["a", "b", "c"]);
    }

    #[test]
    fn search_is_pure() {
        let idx = build_index(vec![doc("d1", "a b"), doc("d2", "b c"), doc("d3", "c a")]).unwrap();
        let s1 = search(&idx, &q("a c"), &ScorerSpec::Bm25 { k1: 1.2, b: 0.75 }, 3);
        let s2 = search(&idx, &q("a c"), &ScorerSpec::Bm25 { k1: 1.2, b: 0.75 }, 3);
        assert_eq!(s1, s2);
    }

    #[test]
    fn random_scorer_depends_on_seed_not_call() {
        let docs: Vec<Document> = (0..12).map(|i| doc(&format!("d{i:02}"), "t")).collect();
        let idx = build_index(docs).unwrap();
        let a1 = search(&idx, &q("t"), &ScorerSpec::Random { seed: 1 }, 12);
        let a2 = search(&idx, &q("t"), &ScorerSpec::Random { seed: 1 }, 12);
        assert_eq!(a1, a2);

        let mut distinct = 0;
        for s in 2..22u64 {
            let b = search(&idx, &q("t"), &ScorerSpec::Random { seed: s }, 12);
            if b.snippets.iter().map(|x| &x.doc_id).ne(a1.snippets.iter().map(|x| &x.doc_id)) {
                distinct += 1;
            }
        }
        assert!(distinct >= 19, "only {distinct}/20 seeds gave distinct orderings");
    }

    #[test]
    fn snippet_window_centers_on_first_match() {
        let d = doc("d1", "x y q z");
        let s = make_snippet(&d, &q("q"), 3, SnippetMode::Textual, 0);
        assert_eq!(s.excerpt, vec!["y", "q", "z"]);
        assert!(s.grade.is_none());
    }

    #[test]
    fn snippet_falls_back_to_prefix() {
        let d = doc("d1", "a b c d e");
        let s = make_snippet(&d, &q("zzz"), 3, SnippetMode::Textual, 0);
        assert_eq!(s.excerpt, vec!["a", "b", "c"]);
    }

    #[test]
    fn perfect_mode_passes_grade_through() {
        let d = doc("d1", "a b");
        let s = make_snippet(&d, &q("a"), 5, SnippetMode::Perfect, 3);
        assert_eq!(s.grade, Some(3));
        assert!(s.excerpt.len() <= 5);
    }
}
