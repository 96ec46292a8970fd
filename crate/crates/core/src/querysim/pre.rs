use super::QuerysimError;
use crate::corpus::Document;
use crate::{Lm, Query, Scalar};

/// Effort of formulating a query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffortModel {
    /// `c_word` seconds-equivalents per query term.
    LengthProportional { c_word: Scalar },
}

impl EffortModel {
    pub fn effort(&self, query: &Query) -> Scalar {
        match self {
            EffortModel::LengthProportional { c_word } => c_word * query.len() as Scalar,
        }
    }
}

/// Parameters of the precision-recall-effort objective.
#[derive(Debug, Clone, PartialEq)]
pub struct PreParams {
    /// Trade-off between the recall (alpha) and precision (1-alpha) terms.
    pub alpha: Scalar,
    /// Weight of the effort penalty.
    pub lambda_effort: Scalar,
    pub effort: EffortModel,
    /// Floor/ceiling on per-term match factors; keeps every log finite.
    pub epsilon: Scalar,
    /// Size of the sampled non-relevant set the caller provides.
    pub n_neg: usize,
}

impl Default for PreParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            lambda_effort: 0.1,
            effort: EffortModel::LengthProportional { c_word: 1.0 },
            epsilon: 0.01,
            n_neg: 100,
        }
    }
}

/// What the user knows about document contents when estimating matches.
#[derive(Debug, Clone)]
pub enum MatchKnowledge<'a> {
    /// The user knows exactly which terms occur in which documents.
    Full,
    /// The user only has a smoothed impression of the document model:
    /// `m(t,d) = clamp((1-lambda)*ml_d(t) + lambda*background(t), eps, 1-eps)`.
    Partial { lambda: Scalar, background: &'a Lm },
}

/// `P(Match=1|q,d)`: product of per-term match factors, each clamped to
/// `[epsilon, 1-epsilon]`. The empty query matches with probability 1.
pub fn match_prob(
    query: &Query,
    doc: &Document,
    knowledge: &MatchKnowledge,
    epsilon: Scalar,
) -> Scalar {
    log_match_prob(query, doc, knowledge, epsilon).exp()
}

fn log_match_prob(
    query: &Query,
    doc: &Document,
    knowledge: &MatchKnowledge,
    epsilon: Scalar,
) -> Scalar {
    let eps = epsilon.clamp(1e-12, 0.5);
    let mut sum = 0.0;
    for term in query {
        let factor = match knowledge {
            MatchKnowledge::Full => {
                if doc.tokens().any(|t| t == term) {
                    1.0 - eps
                } else {
                    eps
                }
            }
            MatchKnowledge::Partial { lambda, background } => {
                let total = doc.len().max(1) as Scalar;
                let tf = doc.tokens().filter(|t| *t == term).count() as Scalar;
                let ml = tf / total;
                ((1.0 - lambda) * ml + lambda * background.prob(term)).clamp(eps, 1.0 - eps)
            }
        };
        sum += factor.ln();
    }
    sum
}

/// Pick the candidate maximizing
/// `alpha*ln(Rec) + (1-alpha)*ln(Prec) - lambda_effort*E(q)`.
///
/// `Rec(q) = prod_{d in rel} P(Match|q,d)` and
/// `Prec(q) = prod_{d in nonrel} (1 - P(Match|q,d))`, both accumulated in log
/// space. Ties go to the earliest candidate. Returns the chosen query and
/// every candidate's score.
pub fn pre_select_query(
    candidates: &[Query],
    rel: &[&Document],
    nonrel: &[&Document],
    params: &PreParams,
    knowledge: &MatchKnowledge,
) -> Result<(Query, Vec<Scalar>), QuerysimError> {
    if candidates.is_empty() {
        return Err(QuerysimError::EmptyCandidates);
    }
    let eps = params.epsilon.clamp(1e-12, 0.5);
    let scores: Vec<Scalar> = candidates
        .iter()
        .map(|q| {
            let log_rec: Scalar = rel
                .iter()
                .map(|d| log_match_prob(q, d, knowledge, params.epsilon))
                .sum();
            let log_prec: Scalar = nonrel
                .iter()
                .map(|d| {
                    let m = match_prob(q, d, knowledge, params.epsilon);
                    (1.0 - m).max(eps).ln()
                })
                .sum();
            params.alpha * log_rec + (1.0 - params.alpha) * log_prec
                - params.lambda_effort * params.effort.effort(q)
        })
        .collect();
    let best = scores
        .iter()
        .enumerate()
        .max_by(|(ia, sa), (ib, sb)| {
            sa.partial_cmp(sb).expect("scores are finite").then_with(|| ib.cmp(ia))
        })
        .map(|(i, _)| i)
        .expect("candidates are non-empty");
    Ok((candidates[best].clone(), scores))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use approx::assert_abs_diff_eq;

    fn doc(id: &str, body: &str) -> Document {
        Document::new(id, vec![], tokenize(body))
    }

    fn q(s: &str) -> Query {
        tokenize(s)
    }

    #[test]
    fn full_knowledge_product_rule() {
        let d = doc("d1", "hubble telescope mirror");
        let p = match_prob(&q("hubble mirror"), &d, &MatchKnowledge::Full, 0.01);
        assert_abs_diff_eq!(p, 0.99 * 0.99, epsilon = 1e-12);
    }

    #[test]
    fn one_absent_term_costs_one_epsilon_factor() {
        let d = doc("d1", "hubble telescope");
        let p = match_prob(&q("hubble zebra"), &d, &MatchKnowledge::Full, 0.01);
        assert_abs_diff_eq!(p, 0.99 * 0.01, epsilon = 1e-12);
    }

    #[test]
    fn empty_query_matches_everything() {
        let d = doc("d1", "anything");
        assert_eq!(match_prob(&q(""), &d, &MatchKnowledge::Full, 0.01), 1.0);
    }

    #[test]
    fn partial_knowledge_clamps_the_smoothed_model() {
        let d = doc("d1", "a a b");
        let bg = crate::corpus::LanguageModel::uniform(["a", "b", "c"]).unwrap();
        let knowledge = MatchKnowledge::Partial { lambda: 0.5, background: &bg };
        // m(a) = 0.5*(2/3) + 0.5*(1/3).
        let p = match_prob(&q("a"), &d, &knowledge, 0.01);
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
        // An impossible term clamps at epsilon.
        let p0 = match_prob(&q("z"), &d, &knowledge, 0.01);
        assert_abs_diff_eq!(p0, 0.01, epsilon = 1e-12);
    }

    #[test]
    fn covering_query_beats_partial_coverage() {
        // q1 matches all of R and none of the non-relevant set; q2 matches
        // half of R. q1 must win for every alpha in (0, 1].
        let r1 = doc("r1", "solar panel");
        let r2 = doc("r2", "solar array");
        let n1 = doc("n1", "rock dust");
        let rel = [&r1, &r2];
        let nonrel = [&n1];
        let candidates = vec![q("solar"), q("panel")];
        for alpha in [0.25, 0.5, 0.75, 1.0] {
            let params = PreParams { alpha, lambda_effort: 0.0, ..Default::default() };
            let (best, scores) =
                pre_select_query(&candidates, &rel, &nonrel, &params, &MatchKnowledge::Full)
                    .unwrap();
            assert_eq!(best, q("solar"), "alpha={alpha}, scores={scores:?}");
        }
    }

    #[test]
    fn effort_breaks_precision_ties() {
        // alpha = 0 ignores recall; equal precision, so the shorter query wins.
        let n1 = doc("n1", "rock dust");
        let candidates = vec![q("solar panel array"), q("solar")];
        let params = PreParams { alpha: 0.0, lambda_effort: 1.0, ..Default::default() };
        let (best, _) =
            pre_select_query(&candidates, &[], &[&n1], &params, &MatchKnowledge::Full).unwrap();
        assert_eq!(best, q("solar"));
    }

    #[test]
    fn argmax_invariant_under_constant_shift() {
        let r1 = doc("r1", "solar panel");
        let r2 = doc("r2", "solar array");
        let n1 = doc("n1", "rock dust");
        let candidates = vec![q("solar"), q("panel"), q("solar panel")];
        let params = PreParams::default();
        let (best, scores) =
            pre_select_query(&candidates, &[&r1, &r2], &[&n1], &params, &MatchKnowledge::Full)
                .unwrap();
        let argmax = scores
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(candidates[argmax], best);
        // A positive affine rescale of the scores cannot change the argmax.
        let rescaled: Vec<Scalar> = scores.iter().map(|s| 2.5 * s + 123.0).collect();
        let argmax_rescaled = rescaled
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(argmax, argmax_rescaled);
    }

    #[test]
    fn ties_go_to_the_first_candidate() {
        let candidates = vec![q("a"), q("a")];
        let params = PreParams::default();
        let (_, scores) =
            pre_select_query(&candidates, &[], &[], &params, &MatchKnowledge::Full).unwrap();
        assert_eq!(scores[0], scores[1]);
        // Identical scores: the max_by tiebreak favors the earlier index.
        let best_idx = scores
            .iter()
            .enumerate()
            .max_by(|(ia, sa), (ib, sb)| sa.partial_cmp(sb).unwrap().then_with(|| ib.cmp(ia)))
            .unwrap()
            .0;
        assert_eq!(best_idx, 0);
    }
}
