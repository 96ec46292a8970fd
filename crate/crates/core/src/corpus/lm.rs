use std::collections::BTreeMap;

use rand::Rng;

use super::CorpusError;
use crate::num::Float;

/// Smoothing applied when estimating a language model.
///
/// The parameter of [`Smoothing::JelinekMercer`] is the mass given to the
/// background model: `p(t) = (1-λ)·ml(t) + λ·bg(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing<F: Float> {
    None,
    JelinekMercer { lambda: F },
    Dirichlet { mu: F },
}

impl<F: Float> Default for Smoothing<F> {
    /// Jelinek-Mercer with a light background weight of 0.1; the default
    /// whenever a background model is supplied.
    fn default() -> Self {
        Smoothing::JelinekMercer { lambda: F::cast(0.1) }
    }
}

/// A unigram distribution over terms.
///
/// Only strictly positive probabilities are stored; [`LanguageModel::prob`]
/// of any other term is zero. Terms are kept in a sorted map so every
/// iteration order (and thus every sampling stream) is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageModel<F: Float> {
    probs: BTreeMap<String, F>,
}

impl<F: Float> LanguageModel<F> {
    /// Maximum-likelihood model from term counts.
    pub fn from_counts<'a, I>(counts: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut acc: BTreeMap<String, F> = BTreeMap::new();
        for (term, n) in counts {
            if n > 0 {
                *acc.entry(term.to_string()).or_insert(F::ZERO) += F::from_count(n);
            }
        }
        Self::normalized(acc)
    }

    /// Normalize a weight map into a model. Errors unless the total mass is
    /// strictly positive (and finite).
    pub fn normalized(weights: BTreeMap<String, F>) -> Result<Self, CorpusError> {
        let total: F = weights.values().copied().sum();
        if total.partial_cmp(&F::ZERO) != Some(std::cmp::Ordering::Greater)
            || !total.is_finite()
        {
            return Err(CorpusError::NoProbabilityMass);
        }
        let probs = weights
            .into_iter()
            .filter(|(_, w)| *w > F::ZERO)
            .map(|(t, w)| (t, w / total))
            .collect();
        let lm = Self { probs };
        debug_assert!(lm.is_normalized());
        Ok(lm)
    }

    /// Uniform distribution over the given terms.
    pub fn uniform<I, S>(terms: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let weights: BTreeMap<String, F> =
            terms.into_iter().map(|t| (t.into(), F::ONE)).collect();
        Self::normalized(weights)
    }

    /// Probability of a term; zero for terms outside the support.
    pub fn prob(&self, term: &str) -> F {
        self.probs.get(term).copied().unwrap_or(F::ZERO)
    }

    /// (term, probability) pairs in sorted term order.
    pub fn terms(&self) -> impl Iterator<Item = (&str, F)> {
        self.probs.iter().map(|(t, p)| (t.as_str(), *p))
    }

    /// Number of terms with positive probability.
    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Mix `self` with `other`: `w·self + (1-w)·other`.
    pub fn mix(&self, other: &Self, w: F) -> Result<Self, CorpusError> {
        let mut weights: BTreeMap<String, F> = BTreeMap::new();
        for (t, p) in self.terms() {
            *weights.entry(t.to_string()).or_insert(F::ZERO) += w * p;
        }
        for (t, p) in other.terms() {
            *weights.entry(t.to_string()).or_insert(F::ZERO) += (F::ONE - w) * p;
        }
        Self::normalized(weights)
    }

    /// True when the probabilities sum to one within [`Float::NORM_EPS`].
    pub fn is_normalized(&self) -> bool {
        let total: F = self.probs.values().copied().sum();
        (total - F::ONE).abs() <= F::NORM_EPS
    }

    /// Precompute a cumulative table for repeated sampling.
    pub fn sampler(&self) -> LmSampler<'_, F> {
        let mut cumulative = Vec::with_capacity(self.probs.len());
        let mut acc = 0f64;
        for p in self.probs.values() {
            acc += p.to_f64().unwrap_or(0.0);
            cumulative.push(acc);
        }
        LmSampler { lm: self, cumulative, total: acc }
    }
}

/// Cumulative-probability sampler over a [`LanguageModel`].
pub struct LmSampler<'a, F: Float> {
    lm: &'a LanguageModel<F>,
    cumulative: Vec<f64>,
    total: f64,
}

impl<'a, F: Float> LmSampler<'a, F> {
    /// Sample one term proportional to its probability.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &'a str {
        let u: f64 = rng.random::<f64>() * self.total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        let idx = idx.min(self.cumulative.len() - 1);
        self.lm
            .probs
            .keys()
            .nth(idx)
            .map(String::as_str)
            .expect("sampler index within support")
    }
}

/// Estimate a language model from token sequences.
///
/// The maximum-likelihood estimate over the pooled counts is combined with
/// the requested smoothing against `background`. With no smoothing, empty
/// input is an error because there is no probability mass to distribute.
pub fn build_lm<F: Float>(
    texts: &[&[String]],
    smoothing: Smoothing<F>,
    background: Option<&LanguageModel<F>>,
) -> Result<LanguageModel<F>, CorpusError> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut total = 0usize;
    for text in texts {
        for tok in text.iter() {
            *counts.entry(tok.as_str()).or_insert(0) += 1;
            total += 1;
        }
    }
    let total_f = F::from_count(total);

    match smoothing {
        Smoothing::None => {
            if total == 0 {
                return Err(CorpusError::NoProbabilityMass);
            }
            let weights = counts
                .into_iter()
                .map(|(t, n)| (t.to_string(), F::from_count(n)))
                .collect();
            LanguageModel::normalized(weights)
        }
        Smoothing::JelinekMercer { lambda } => {
            let bg = background.ok_or(CorpusError::NoProbabilityMass)?;
            if total == 0 {
                if lambda < F::ONE {
                    return Err(CorpusError::NoProbabilityMass);
                }
                return Ok(bg.clone());
            }
            let mut weights: BTreeMap<String, F> = BTreeMap::new();
            for (t, n) in &counts {
                let ml = F::from_count(*n) / total_f;
                weights.insert((*t).to_string(), (F::ONE - lambda) * ml);
            }
            for (t, p) in bg.terms() {
                *weights.entry(t.to_string()).or_insert(F::ZERO) += lambda * p;
            }
            LanguageModel::normalized(weights)
        }
        Smoothing::Dirichlet { mu } => {
            let bg = background.ok_or(CorpusError::NoProbabilityMass)?;
            if total == 0 && mu <= F::ZERO {
                return Err(CorpusError::NoProbabilityMass);
            }
            let denom = total_f + mu;
            let mut weights: BTreeMap<String, F> = BTreeMap::new();
            for (t, n) in &counts {
                weights.insert((*t).to_string(), F::from_count(*n) / denom);
            }
            for (t, p) in bg.terms() {
                *weights.entry(t.to_string()).or_insert(F::ZERO) += mu * p / denom;
            }
            LanguageModel::normalized(weights)
        }
    }
}

/// Kullback-Leibler divergence `Σ p(t)·ln(p(t)/q(t))` in nats.
///
/// The caller smooths `q`: any term with `p(t) > 0` and `q(t) = 0` is a
/// domain error.
pub fn kl_divergence<F: Float>(
    p: &LanguageModel<F>,
    q: &LanguageModel<F>,
) -> Result<F, CorpusError> {
    let mut sum = F::ZERO;
    for (t, pt) in p.terms() {
        let qt = q.prob(t);
        if qt <= F::ZERO {
            return Err(CorpusError::KlDomain { term: t.to_string() });
        }
        sum += pt * (pt / qt).ln();
    }
    Ok(sum)
}

/// Jensen-Shannon divergence in nats: symmetric, bounded by `ln 2`.
pub fn js_divergence<F: Float>(p: &LanguageModel<F>, q: &LanguageModel<F>) -> F {
    let half = F::cast(0.5);
    let m = match p.mix(q, half) {
        Ok(m) => m,
        Err(_) => return F::ZERO,
    };
    let kp = kl_divergence(p, &m).unwrap_or(F::ZERO);
    let kq = kl_divergence(q, &m).unwrap_or(F::ZERO);
    half * (kp + kq)
}
