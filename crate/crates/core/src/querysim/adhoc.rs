use std::collections::BTreeMap;

use rand::Rng;

use super::QuerysimError;
use crate::corpus::{Document, LanguageModel, Topic};
use crate::{Lm, Query, Scalar};

/// Where the on-topic component of the query model comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopicSource {
    /// Maximum likelihood over the relevant documents.
    FrequentTerms,
    /// Terms weighted by their relative-entropy contribution against the
    /// collection.
    DiscriminativeTerms,
    /// Maximum likelihood over the seed query (the topic title).
    SeedQuery,
}

/// Two-component mixture model for ad hoc queries.
#[derive(Debug, Clone, PartialEq)]
pub struct AdhocSpec {
    pub source: TopicSource,
    /// Weight of the on-topic component; `1 - lambda_mix` goes to collection
    /// noise.
    pub lambda_mix: Scalar,
    /// Query length.
    pub length: usize,
    /// Re-estimate the topic model from snippets seen during the session.
    pub dynamic: bool,
}

/// The exact term distribution queries are sampled from:
/// `lambda_mix * P(t|topic) + (1 - lambda_mix) * P(t|collection)`.
///
/// With `dynamic` set, snippet texts seen so far join the topic-model
/// estimation data.
pub fn adhoc_pmf(
    topic: &Topic,
    rel_docs: &[&Document],
    collection_lm: &Lm,
    spec: &AdhocSpec,
    seen_snippets: &[Vec<String>],
) -> Result<Lm, QuerysimError> {
    let dynamic_texts: &[Vec<String>] = if spec.dynamic { seen_snippets } else { &[] };
    let topic_lm = topic_model(topic, rel_docs, collection_lm, spec.source, dynamic_texts)?;
    Ok(topic_lm.mix(collection_lm, spec.lambda_mix)?)
}

/// Sample one ad hoc query of `spec.length` terms.
pub fn gen_adhoc<R: Rng + ?Sized>(
    topic: &Topic,
    rel_docs: &[&Document],
    collection_lm: &Lm,
    spec: &AdhocSpec,
    seen_snippets: &[Vec<String>],
    rng: &mut R,
) -> Result<Query, QuerysimError> {
    let pmf = adhoc_pmf(topic, rel_docs, collection_lm, spec, seen_snippets)?;
    let sampler = pmf.sampler();
    Ok((0..spec.length.max(1)).map(|_| sampler.sample(rng).to_string()).collect())
}

fn topic_model(
    topic: &Topic,
    rel_docs: &[&Document],
    collection_lm: &Lm,
    source: TopicSource,
    extra_texts: &[Vec<String>],
) -> Result<Lm, QuerysimError> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut count_tokens = |tokens: &mut dyn Iterator<Item = &String>| {
        for t in tokens {
            *counts.entry(t.clone()).or_insert(0) += 1;
        }
    };
    match source {
        TopicSource::SeedQuery => count_tokens(&mut topic.title.iter()),
        TopicSource::FrequentTerms | TopicSource::DiscriminativeTerms => {
            if rel_docs.is_empty() && extra_texts.is_empty() {
                return Err(QuerysimError::InvalidSpec(
                    "relevant-document topic models need a non-empty document set".into(),
                ));
            }
            for d in rel_docs {
                count_tokens(&mut d.tokens());
            }
        }
    }
    for text in extra_texts {
        count_tokens(&mut text.iter());
    }
    let ml = LanguageModel::from_counts(counts.iter().map(|(t, n)| (t.as_str(), *n)))?;
    if source != TopicSource::DiscriminativeTerms {
        return Ok(ml);
    }

    // Weight terms by p(t)ln(p(t)/p_C(t)), dropping non-positive scores.
    let floor = 1e-12;
    let weights: BTreeMap<String, Scalar> = ml
        .terms()
        .filter_map(|(t, p)| {
            let pc = collection_lm.prob(t).max(floor);
            let score = p * (p / pc).ln();
            (score > 0.0).then(|| (t.to_string(), score))
        })
        .collect();
    match LanguageModel::normalized(weights) {
        Ok(lm) => Ok(lm),
        // Nothing discriminative: fall back to the frequency model.
        Err(_) => Ok(ml),
    }
}
