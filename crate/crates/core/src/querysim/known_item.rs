use rand::Rng;

use super::QuerysimError;
use crate::corpus::{Document, LanguageModel};
use crate::{Lm, Query, Scalar};

/// Prior over which document is the known item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocPrior {
    Uniform,
    LengthProportional,
}

/// Explicit query-length distribution over 1..=L_max.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthPmf {
    probs: Vec<Scalar>,
}

impl LengthPmf {
    /// `probs[i]` is the probability of length `i+1`; must sum to 1.
    pub fn new(probs: Vec<Scalar>) -> Result<Self, QuerysimError> {
        if probs.is_empty() {
            return Err(QuerysimError::InvalidSpec("length pmf is empty".into()));
        }
        let total: Scalar = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 || probs.iter().any(|&p| p < 0.0) {
            return Err(QuerysimError::InvalidSpec(format!(
                "length pmf must sum to 1, sums to {total}"
            )));
        }
        Ok(Self { probs })
    }

    /// All mass on a single length.
    pub fn fixed(len: usize) -> Self {
        let len = len.max(1);
        let mut probs = vec![0.0; len];
        probs[len - 1] = 1.0;
        Self { probs }
    }

    pub fn max_len(&self) -> usize {
        self.probs.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: Scalar = rng.random();
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i + 1;
            }
        }
        self.probs.len()
    }
}

/// Term distribution the query terms are recalled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TermModel {
    /// Maximum likelihood over the known item.
    Ml,
    /// Mix the document model with collection noise:
    /// `(1-lambda)*ml_d + lambda*collection`.
    MlWithNoise { lambda: Scalar },
}

/// Generative model for known-item queries.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownItemSpec {
    pub doc_prior: DocPrior,
    pub length: LengthPmf,
    pub term_model: TermModel,
}

const MAX_RESAMPLES: usize = 100;

/// Sample a (query, target document) pair.
///
/// A document is drawn from the prior, a length from the pmf, and that many
/// terms i.i.d. from the document model (optionally mixed with collection
/// noise). Documents with empty vocabularies are resampled, erroring after
/// 100 attempts.
pub fn gen_known_item<R: Rng + ?Sized>(
    docs: &[Document],
    spec: &KnownItemSpec,
    collection_lm: Option<&Lm>,
    rng: &mut R,
) -> Result<(Query, String), QuerysimError> {
    let target = sample_target(docs, spec.doc_prior, rng)?;
    let doc = &docs[target];
    let query = query_for_doc(doc, spec, collection_lm, rng)?;
    Ok((query, doc.id.clone()))
}

/// Pick the known item: a non-empty document drawn from the prior.
pub fn sample_target<R: Rng + ?Sized>(
    docs: &[Document],
    prior: DocPrior,
    rng: &mut R,
) -> Result<usize, QuerysimError> {
    if docs.is_empty() {
        return Err(QuerysimError::EmptyCollection);
    }
    for _ in 0..MAX_RESAMPLES {
        let candidate = sample_doc(docs, prior, rng);
        if !docs[candidate].is_empty() {
            return Ok(candidate);
        }
    }
    Err(QuerysimError::EmptyVocabulary(MAX_RESAMPLES))
}

/// Sample one query for a fixed known item.
pub fn query_for_doc<R: Rng + ?Sized>(
    doc: &Document,
    spec: &KnownItemSpec,
    collection_lm: Option<&Lm>,
    rng: &mut R,
) -> Result<Query, QuerysimError> {
    if let TermModel::MlWithNoise { .. } = spec.term_model {
        if collection_lm.is_none() {
            return Err(QuerysimError::InvalidSpec(
                "noise term model needs a collection language model".into(),
            ));
        }
    }
    let doc_lm: Lm = LanguageModel::from_counts(doc.tokens().fold(
        std::collections::BTreeMap::new(),
        |mut m, t| {
            *m.entry(t.as_str()).or_insert(0usize) += 1;
            m
        },
    ))?;
    let term_lm = match spec.term_model {
        TermModel::Ml => doc_lm,
        TermModel::MlWithNoise { lambda } => {
            doc_lm.mix(collection_lm.expect("checked above"), 1.0 - lambda)?
        }
    };

    let len = spec.length.sample(rng);
    let sampler = term_lm.sampler();
    Ok((0..len).map(|_| sampler.sample(rng).to_string()).collect())
}

fn sample_doc<R: Rng + ?Sized>(docs: &[Document], prior: DocPrior, rng: &mut R) -> usize {
    match prior {
        DocPrior::Uniform => rng.random_range(0..docs.len()),
        DocPrior::LengthProportional => {
            let total: usize = docs.iter().map(Document::len).sum();
            if total == 0 {
                return rng.random_range(0..docs.len());
            }
            let mut pick = rng.random_range(0..total);
            for (i, d) in docs.iter().enumerate() {
                if pick < d.len() {
                    return i;
                }
                pick -= d.len();
            }
            docs.len() - 1
        }
    }
}
