use std::collections::BTreeMap;

use super::click::GradeProbTable;
use super::BehaviorError;
use crate::corpus::{Document, LanguageModel};
use crate::num::Float;
use crate::{Grade, Scalar};

/// Weights of the relevance-language-model mixture.
///
/// `z = w_topic + w_interaction + w_background` normalizes the three user
/// components before they are smoothed with the collection model by `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelevanceModelWeights {
    pub w_topic: Scalar,
    pub w_interaction: Scalar,
    pub w_background: Scalar,
    pub lambda: Scalar,
}

impl Default for RelevanceModelWeights {
    fn default() -> Self {
        Self { w_topic: 1.0, w_interaction: 1.0, w_background: 1.0, lambda: 0.6 }
    }
}

/// How a clicked document is judged relevant.
#[derive(Debug, Clone, PartialEq)]
pub enum JudgeModel {
    /// Deterministic: relevant iff the ground-truth grade is >= `mu`.
    Threshold { mu: Grade },
    /// Stochastic in the ground-truth grade.
    Stochastic(GradeProbTable),
    /// Deterministic in the relevance-model score: relevant iff >= `mu`.
    /// Useful thresholds live in [-0.4, 0.4], liberal to strict.
    RelevanceLm { mu: Scalar },
}

/// The evidence available to the judge: a qrels grade or a text score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JudgeInput {
    Grade(Grade),
    Score(Scalar),
}

/// Probability that the user judges the document relevant.
pub fn judge_prob(model: &JudgeModel, input: JudgeInput) -> Result<Scalar, BehaviorError> {
    match (model, input) {
        (JudgeModel::Threshold { mu }, JudgeInput::Grade(g)) => {
            Ok(if g >= *mu { 1.0 } else { 0.0 })
        }
        (JudgeModel::Stochastic(table), JudgeInput::Grade(g)) => Ok(table.prob(g)),
        (JudgeModel::RelevanceLm { mu }, JudgeInput::Score(s)) => {
            Ok(if s >= *mu { 1.0 } else { 0.0 })
        }
        (JudgeModel::Threshold { .. }, JudgeInput::Score(_))
        | (JudgeModel::Stochastic(_), JudgeInput::Score(_)) => {
            Err(BehaviorError::InputMismatch("grade-based judge got a score"))
        }
        (JudgeModel::RelevanceLm { .. }, JudgeInput::Grade(_)) => {
            Err(BehaviorError::InputMismatch("relevance-lm judge got a grade"))
        }
    }
}

/// Mix topic, interaction, and background knowledge into a relevance model,
/// smoothed with the collection model:
///
/// `P(t|R) = lambda * (w_T/z P(t|T) + w_I/z P(t|RD) + w_B/z P(t|B)) + (1-lambda) P(t|C)`
pub fn build_relevance_model<F: Float>(
    topic: &LanguageModel<F>,
    rel_docs: &LanguageModel<F>,
    background: &LanguageModel<F>,
    collection: &LanguageModel<F>,
    weights: &RelevanceModelWeights,
) -> Result<LanguageModel<F>, BehaviorError> {
    let z = weights.w_topic + weights.w_interaction + weights.w_background;
    if !z.is_finite() || z <= 0.0 {
        return Err(BehaviorError::ZeroWeightSum);
    }
    let lambda = F::cast(weights.lambda);
    let wt = F::cast(weights.w_topic / z);
    let wi = F::cast(weights.w_interaction / z);
    let wb = F::cast(weights.w_background / z);

    let mut acc: BTreeMap<String, F> = BTreeMap::new();
    let mut add = |lm: &LanguageModel<F>, w: F| {
        if w > F::ZERO {
            for (t, p) in lm.terms() {
                *acc.entry(t.to_string()).or_insert(F::ZERO) += w * p;
            }
        }
    };
    add(topic, lambda * wt);
    add(rel_docs, lambda * wi);
    add(background, lambda * wb);
    add(collection, F::ONE - lambda);
    Ok(LanguageModel::normalized(acc)?)
}

/// Normalized log-likelihood score of a token sequence against a relevance
/// model: `(1/|d|) * sum_t P(t|d) * ln(P(t|R)/P(t|C))`.
///
/// `collection` must cover every token (the caller smooths); unseen tokens
/// contribute the most negative finite ratio available instead of -inf.
pub fn relevance_score_tokens<F: Float>(
    tokens: &[String],
    relevance: &LanguageModel<F>,
    collection: &LanguageModel<F>,
) -> Result<F, BehaviorError> {
    if tokens.is_empty() {
        return Err(BehaviorError::EmptyDocument);
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_insert(0) += 1;
    }
    let len = F::from_count(tokens.len());
    let floor = F::cast(1e-12);
    let mut sum = F::ZERO;
    for (t, n) in counts {
        let p_doc = F::from_count(n) / len;
        let p_rel = relevance.prob(t).max(floor);
        let p_coll = collection.prob(t).max(floor);
        sum += p_doc * (p_rel / p_coll).ln();
    }
    Ok(sum)
}

/// [`relevance_score_tokens`] over a full document (title plus body).
pub fn relevance_score<F: Float>(
    doc: &Document,
    relevance: &LanguageModel<F>,
    collection: &LanguageModel<F>,
) -> Result<F, BehaviorError> {
    let tokens: Vec<String> = doc.tokens().cloned().collect();
    relevance_score_tokens(&tokens, relevance, collection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lm(pairs: &[(&str, f64)]) -> LanguageModel<f64> {
        LanguageModel::normalized(pairs.iter().map(|(t, p)| (t.to_string(), *p)).collect())
            .unwrap()
    }

    #[test]
    fn judge_tables_match_calibration() {
        let baskaya = JudgeModel::Stochastic(GradeProbTable::baskaya2013_judge());
        for (g, p) in [(0, 0.20), (1, 0.88), (2, 0.95), (3, 0.97)] {
            assert_eq!(judge_prob(&baskaya, JudgeInput::Grade(g)).unwrap(), p);
        }
        let maxwell = JudgeModel::Stochastic(GradeProbTable::maxwell2015_judge());
        assert_eq!(judge_prob(&maxwell, JudgeInput::Grade(0)).unwrap(), 0.53);
        assert_eq!(judge_prob(&maxwell, JudgeInput::Grade(2)).unwrap(), 0.71);
    }

    #[test]
    fn threshold_judge_is_deterministic() {
        let m = JudgeModel::Threshold { mu: 2 };
        assert_eq!(judge_prob(&m, JudgeInput::Grade(1)).unwrap(), 0.0);
        assert_eq!(judge_prob(&m, JudgeInput::Grade(2)).unwrap(), 1.0);
    }

    #[test]
    fn mismatched_input_is_an_error() {
        let m = JudgeModel::Threshold { mu: 1 };
        assert!(judge_prob(&m, JudgeInput::Score(0.5)).is_err());
        let r = JudgeModel::RelevanceLm { mu: 0.0 };
        assert!(judge_prob(&r, JudgeInput::Grade(1)).is_err());
    }

    #[test]
    fn degenerate_mixtures_collapse() {
        let t = lm(&[("a", 1.0)]);
        let rd = lm(&[("b", 1.0)]);
        let bg = lm(&[("c", 1.0)]);
        let coll = lm(&[("a", 0.25), ("b", 0.25), ("c", 0.25), ("d", 0.25)]);

        // lambda = 0 leaves only the collection model.
        let w0 = RelevanceModelWeights { lambda: 0.0, ..Default::default() };
        let r0 = build_relevance_model(&t, &rd, &bg, &coll, &w0).unwrap();
        assert_abs_diff_eq!(r0.prob("d"), 0.25, epsilon = 1e-12);

        // lambda = 1 with only the topic weight reproduces the topic model.
        let w1 = RelevanceModelWeights {
            w_topic: 2.0,
            w_interaction: 0.0,
            w_background: 0.0,
            lambda: 1.0,
        };
        let r1 = build_relevance_model(&t, &rd, &bg, &coll, &w1).unwrap();
        assert_abs_diff_eq!(r1.prob("a"), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_term_mixture_hand_value() {
        let t = lm(&[("a", 1.0)]);
        let rd = lm(&[("a", 0.5), ("b", 0.5)]);
        let bg = lm(&[("b", 1.0)]);
        let coll = lm(&[("a", 0.5), ("b", 0.5)]);
        let w = RelevanceModelWeights {
            w_topic: 1.0,
            w_interaction: 1.0,
            w_background: 1.0,
            lambda: 0.5,
        };
        // P(a) = 0.5*(1/3*1 + 1/3*0.5 + 1/3*0) + 0.5*0.5 = 0.5
        // P(b) = 0.5*(1/3*0 + 1/3*0.5 + 1/3*1) + 0.5*0.5 = 0.5
        let r = build_relevance_model(&t, &rd, &bg, &coll, &w).unwrap();
        assert_abs_diff_eq!(r.prob("a"), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.prob("b"), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn zero_weight_sum_is_an_error() {
        let t = lm(&[("a", 1.0)]);
        let w = RelevanceModelWeights {
            w_topic: 0.0,
            w_interaction: 0.0,
            w_background: 0.0,
            lambda: 0.5,
        };
        assert_eq!(
            build_relevance_model(&t, &t, &t, &t, &w).unwrap_err(),
            BehaviorError::ZeroWeightSum
        );
    }

    #[test]
    fn score_is_zero_when_models_agree() {
        let coll = lm(&[("a", 0.5), ("b", 0.5)]);
        let tokens = vec!["a".to_string(), "b".to_string(), "a".to_string()];
        let s = relevance_score_tokens(&tokens, &coll, &coll).unwrap();
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn concentrated_doc_scores_log_ratio() {
        let rel = lm(&[("a", 0.5), ("b", 0.5)]);
        let coll = lm(&[("a", 0.25), ("b", 0.75)]);
        let tokens = vec!["a".to_string()];
        let s = relevance_score_tokens(&tokens, &rel, &coll).unwrap();
        assert_abs_diff_eq!(s, 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn swapping_in_a_favored_term_raises_the_score() {
        let rel = lm(&[("good", 0.8), ("noise", 0.2)]);
        let coll = lm(&[("good", 0.5), ("noise", 0.5)]);
        let low = vec!["noise".to_string(), "noise".to_string()];
        let high = vec!["noise".to_string(), "good".to_string()];
        assert!(
            relevance_score_tokens(&high, &rel, &coll).unwrap()
                > relevance_score_tokens(&low, &rel, &coll).unwrap()
        );
    }

    #[test]
    fn empty_doc_is_an_error() {
        let coll = lm(&[("a", 1.0)]);
        assert_eq!(
            relevance_score_tokens(&[], &coll, &coll).unwrap_err(),
            BehaviorError::EmptyDocument
        );
    }
}
