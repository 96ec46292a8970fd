use std::collections::BTreeSet;

use crate::corpus::{kl_divergence, LanguageModel};
use crate::{Lm, Scalar};

/// Similarity notion used by difference-based stopping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityMetric {
    /// Jaccard overlap of token sets; stop when it reaches the threshold.
    Overlap,
    /// KL divergence of the current snippet against a seen snippet; stop
    /// when the smallest divergence falls to the threshold or below.
    Kl,
}

/// When to stop examining the current result list.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryStop {
    /// Stop after exactly `k` snippets, regardless of relevance.
    FixedDepth { k: usize },
    /// Frustration: stop once `n` non-relevant snippets were seen in total.
    TotalNonrel { n: usize },
    /// Frustration: stop once `n` non-relevant snippets arrive in a row.
    ContiguousNonrel { n: usize },
    /// Satisfaction: stop once `n` relevant snippets were found.
    Satisfaction { n: usize },
    /// Stop at whichever of satisfaction or frustration fires first.
    SatisfactionOrFrustration { n_sat: usize, n_frus: usize },
    /// Stop when the current snippet is too similar to seen content.
    Difference { theta: Scalar, metric: SimilarityMetric },
    /// Stop when the rate of gain drops below `theta` after `min_docs`.
    RateOfGain { theta: Scalar, min_docs: usize },
    /// Stop once this much time was spent on the query's results.
    Time { t_max: Scalar },
    /// Stop once this much time passed since the last relevant snippet.
    TimeSinceRel { t: Scalar },
}

/// When to abandon the whole session rather than reformulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SessionStop {
    /// Issue at most this many queries.
    MaxQueries { n: usize },
    /// The goal is met after `n` relevant documents in total.
    Satisfaction { n: usize },
    /// Give up after `n` non-relevant snippets in total.
    Frustration { n: usize },
    /// Give up when the session time budget is spent.
    TimeBudget { t: Scalar },
}

/// Query-level and session-level stopping rules of one user.
#[derive(Debug, Clone, PartialEq)]
pub struct StopPolicy {
    pub query: QueryStop,
    pub session: SessionStop,
}

/// Why a query-level stop fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    FixedDepth,
    Frustration,
    Satisfaction,
    Difference,
    RateOfGain,
    Time,
    EndOfResults,
    ScanEnded,
    SerpSkipped,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::FixedDepth => "fixed-depth",
            StopReason::Frustration => "frustration",
            StopReason::Satisfaction => "satisfaction",
            StopReason::Difference => "difference",
            StopReason::RateOfGain => "rate-of-gain",
            StopReason::Time => "time",
            StopReason::EndOfResults => "end-of-results",
            StopReason::ScanEnded => "scan-ended",
            StopReason::SerpSkipped => "serp-skipped",
        }
    }
}

/// Outcome of a query-level stop check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopVerdict {
    Continue,
    StopQuery(StopReason),
}

/// Outcome of the session-level decision after a query stop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionVerdict {
    NewQuery,
    Abandon(AbandonReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbandonReason {
    MaxQueries,
    Satisfaction,
    Frustration,
    TimeBudget,
    OutOfQueries,
    Budget,
}

impl AbandonReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            AbandonReason::MaxQueries => "max-queries",
            AbandonReason::Satisfaction => "satisfaction",
            AbandonReason::Frustration => "frustration",
            AbandonReason::TimeBudget => "time-budget",
            AbandonReason::OutOfQueries => "out-of-queries",
            AbandonReason::Budget => "budget",
        }
    }
}

/// Counters of the interaction with one query's results.
///
/// `record_examined` keeps them consistent: the streak never exceeds the
/// total, and the gain trace discounts by rank.
#[derive(Debug, Clone, Default)]
pub struct QueryState {
    pub examined: usize,
    pub clicked: usize,
    pub rel_snippets: usize,
    pub nonrel_total: usize,
    pub nonrel_streak: usize,
    /// Rank-discounted gain of examined snippets.
    pub gain: Scalar,
    /// Seconds spent interacting with this query's results.
    pub elapsed: Scalar,
    /// Value of `elapsed` when the last relevant snippet was seen.
    pub last_rel_elapsed: Scalar,
    /// Token sequences of snippets examined under this query.
    pub seen_snippets: Vec<Vec<String>>,
}

impl QueryState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record an examined snippet with the user-perceived grade at `rank`.
    pub fn record_examined(&mut self, rank: usize, grade: i32) {
        self.examined += 1;
        if grade >= 1 {
            self.rel_snippets += 1;
            self.nonrel_streak = 0;
            self.last_rel_elapsed = self.elapsed;
        } else {
            self.nonrel_total += 1;
            self.nonrel_streak += 1;
        }
        self.gain += grade.max(0) as Scalar / ((rank as Scalar) + 1.0).log2();
    }

    pub fn record_click(&mut self) {
        self.clicked += 1;
    }

    pub fn add_time(&mut self, seconds: Scalar) {
        self.elapsed += seconds;
    }
}

/// Session-level counters feeding [`session_continue`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SessionCounters {
    pub queries_issued: usize,
    pub rel_docs_found: usize,
    pub nonrel_snippets: usize,
    pub elapsed: Scalar,
    /// Set when the query generator has run out of reformulations.
    pub out_of_queries: bool,
}

/// Query-level stop check, evaluated after each snippet interaction has been
/// folded into `state`. `current` holds the just-examined snippet's tokens;
/// `state.seen_snippets` holds only the earlier ones.
pub fn stop_decision(policy: &QueryStop, state: &QueryState, current: &[String]) -> StopVerdict {
    let fire = |reason| StopVerdict::StopQuery(reason);
    match policy {
        QueryStop::FixedDepth { k } => {
            if state.examined >= *k {
                return fire(StopReason::FixedDepth);
            }
        }
        QueryStop::TotalNonrel { n } => {
            if state.nonrel_total >= *n {
                return fire(StopReason::Frustration);
            }
        }
        QueryStop::ContiguousNonrel { n } => {
            if state.nonrel_streak >= *n {
                return fire(StopReason::Frustration);
            }
        }
        QueryStop::Satisfaction { n } => {
            if state.rel_snippets >= *n {
                return fire(StopReason::Satisfaction);
            }
        }
        QueryStop::SatisfactionOrFrustration { n_sat, n_frus } => {
            if state.rel_snippets >= *n_sat {
                return fire(StopReason::Satisfaction);
            }
            if state.nonrel_total >= *n_frus {
                return fire(StopReason::Frustration);
            }
        }
        QueryStop::Difference { theta, metric } => {
            if too_similar(current, &state.seen_snippets, *theta, *metric) {
                return fire(StopReason::Difference);
            }
        }
        QueryStop::RateOfGain { theta, min_docs } => {
            if state.examined >= *min_docs
                && state.elapsed > 0.0
                && state.gain / state.elapsed < *theta
            {
                return fire(StopReason::RateOfGain);
            }
        }
        QueryStop::Time { t_max } => {
            if state.elapsed >= *t_max {
                return fire(StopReason::Time);
            }
        }
        QueryStop::TimeSinceRel { t } => {
            if state.elapsed - state.last_rel_elapsed >= *t {
                return fire(StopReason::Time);
            }
        }
    }
    StopVerdict::Continue
}

fn too_similar(
    current: &[String],
    seen: &[Vec<String>],
    theta: Scalar,
    metric: SimilarityMetric,
) -> bool {
    if current.is_empty() {
        return false;
    }
    match metric {
        SimilarityMetric::Overlap => {
            let cur: BTreeSet<&String> = current.iter().collect();
            seen.iter().any(|prev| {
                let prev: BTreeSet<&String> = prev.iter().collect();
                let inter = cur.intersection(&prev).count();
                let union = cur.union(&prev).count();
                union > 0 && inter as Scalar / union as Scalar >= theta
            })
        }
        SimilarityMetric::Kl => {
            let cur_lm = match snippet_lm(current) {
                Some(lm) => lm,
                None => return false,
            };
            seen.iter().any(|prev| {
                snippet_lm_smoothed(prev, current).is_some_and(|prev_lm| {
                    kl_divergence(&cur_lm, &prev_lm).map(|d| d <= theta).unwrap_or(false)
                })
            })
        }
    }
}

fn snippet_lm(tokens: &[String]) -> Option<Lm> {
    let counts = tokens.iter().fold(std::collections::BTreeMap::new(), |mut m, t| {
        *m.entry(t.as_str()).or_insert(0usize) += 1;
        m
    });
    LanguageModel::from_counts(counts).ok()
}

// The seen snippet's model, uniform-smoothed over both snippets' vocabulary
// so the KL against the current snippet is defined.
fn snippet_lm_smoothed(tokens: &[String], union_with: &[String]) -> Option<Lm> {
    let ml = snippet_lm(tokens)?;
    let vocab: BTreeSet<&String> = tokens.iter().chain(union_with.iter()).collect();
    let uniform = LanguageModel::uniform(vocab.iter().map(|s| s.as_str())).ok()?;
    ml.mix(&uniform, 0.9).ok()
}

/// Session-level decision after a query stop: reformulate or abandon.
pub fn session_continue(policy: &SessionStop, counters: &SessionCounters) -> SessionVerdict {
    if counters.out_of_queries {
        return SessionVerdict::Abandon(AbandonReason::OutOfQueries);
    }
    match policy {
        SessionStop::MaxQueries { n } => {
            if counters.queries_issued >= *n {
                return SessionVerdict::Abandon(AbandonReason::MaxQueries);
            }
        }
        SessionStop::Satisfaction { n } => {
            if counters.rel_docs_found >= *n {
                return SessionVerdict::Abandon(AbandonReason::Satisfaction);
            }
        }
        SessionStop::Frustration { n } => {
            if counters.nonrel_snippets >= *n {
                return SessionVerdict::Abandon(AbandonReason::Frustration);
            }
        }
        SessionStop::TimeBudget { t } => {
            if counters.elapsed >= *t {
                return SessionVerdict::Abandon(AbandonReason::TimeBudget);
            }
        }
    }
    SessionVerdict::NewQuery
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn total_nonrel_fires_on_the_third() {
        let policy = QueryStop::TotalNonrel { n: 3 };
        let mut state = QueryState::new();
        for i in 1..=3 {
            state.record_examined(i, 0);
            let verdict = stop_decision(&policy, &state, &[]);
            if i < 3 {
                assert_eq!(verdict, StopVerdict::Continue);
            } else {
                assert_eq!(verdict, StopVerdict::StopQuery(StopReason::Frustration));
            }
        }
    }

    #[test]
    fn satisfaction_fires_on_first_relevant() {
        let policy = QueryStop::Satisfaction { n: 1 };
        let mut state = QueryState::new();
        state.record_examined(1, 0);
        assert_eq!(stop_decision(&policy, &state, &[]), StopVerdict::Continue);
        state.record_examined(2, 2);
        assert_eq!(
            stop_decision(&policy, &state, &[]),
            StopVerdict::StopQuery(StopReason::Satisfaction)
        );
    }

    #[test]
    fn fixed_depth_ignores_grades() {
        let policy = QueryStop::FixedDepth { k: 2 };
        let mut state = QueryState::new();
        state.record_examined(1, 3);
        assert_eq!(stop_decision(&policy, &state, &[]), StopVerdict::Continue);
        state.record_examined(2, 3);
        assert_eq!(
            stop_decision(&policy, &state, &[]),
            StopVerdict::StopQuery(StopReason::FixedDepth)
        );
    }

    #[test]
    fn contiguous_streak_resets_on_relevant() {
        let policy = QueryStop::ContiguousNonrel { n: 2 };
        let mut state = QueryState::new();
        state.record_examined(1, 0);
        state.record_examined(2, 2);
        state.record_examined(3, 0);
        assert_eq!(stop_decision(&policy, &state, &[]), StopVerdict::Continue);
        state.record_examined(4, 0);
        assert_eq!(
            stop_decision(&policy, &state, &[]),
            StopVerdict::StopQuery(StopReason::Frustration)
        );
    }

    #[test]
    fn difference_overlap_stops_on_near_duplicate() {
        let policy = QueryStop::Difference { theta: 0.6, metric: SimilarityMetric::Overlap };
        let mut state = QueryState::new();
        state.seen_snippets.push(toks("hubble mirror repair"));
        assert_eq!(
            stop_decision(&policy, &state, &toks("hubble mirror repair")),
            StopVerdict::StopQuery(StopReason::Difference)
        );
        assert_eq!(
            stop_decision(&policy, &state, &toks("unrelated totally new")),
            StopVerdict::Continue
        );
    }

    #[test]
    fn difference_kl_stops_when_divergence_small() {
        let policy = QueryStop::Difference { theta: 0.05, metric: SimilarityMetric::Kl };
        let mut state = QueryState::new();
        state.seen_snippets.push(toks("a b c d"));
        assert_eq!(
            stop_decision(&policy, &state, &toks("a b c d")),
            StopVerdict::StopQuery(StopReason::Difference)
        );
        assert_eq!(stop_decision(&policy, &state, &toks("x y z w")), StopVerdict::Continue);
    }

    #[test]
    fn rate_of_gain_needs_minimum_docs() {
        let policy = QueryStop::RateOfGain { theta: 0.5, min_docs: 3 };
        let mut state = QueryState::new();
        state.add_time(100.0);
        state.record_examined(1, 0);
        assert_eq!(stop_decision(&policy, &state, &[]), StopVerdict::Continue);
        state.record_examined(2, 0);
        state.record_examined(3, 0);
        assert_eq!(
            stop_decision(&policy, &state, &[]),
            StopVerdict::StopQuery(StopReason::RateOfGain)
        );
    }

    #[test]
    fn time_rules_compare_elapsed() {
        let mut state = QueryState::new();
        state.add_time(30.0);
        assert_eq!(
            stop_decision(&QueryStop::Time { t_max: 30.0 }, &state, &[]),
            StopVerdict::StopQuery(StopReason::Time)
        );
        state.record_examined(1, 2); // relevant at t=30
        state.add_time(10.0);
        assert_eq!(
            stop_decision(&QueryStop::TimeSinceRel { t: 20.0 }, &state, &[]),
            StopVerdict::Continue
        );
        state.add_time(10.0);
        assert_eq!(
            stop_decision(&QueryStop::TimeSinceRel { t: 20.0 }, &state, &[]),
            StopVerdict::StopQuery(StopReason::Time)
        );
    }

    #[test]
    fn session_rules() {
        let c = SessionCounters { queries_issued: 5, ..Default::default() };
        assert_eq!(
            session_continue(&SessionStop::MaxQueries { n: 5 }, &c),
            SessionVerdict::Abandon(AbandonReason::MaxQueries)
        );
        let c = SessionCounters { queries_issued: 4, ..Default::default() };
        assert_eq!(session_continue(&SessionStop::MaxQueries { n: 5 }, &c), SessionVerdict::NewQuery);

        let c = SessionCounters { rel_docs_found: 2, ..Default::default() };
        assert_eq!(
            session_continue(&SessionStop::Satisfaction { n: 2 }, &c),
            SessionVerdict::Abandon(AbandonReason::Satisfaction)
        );

        let c = SessionCounters { elapsed: 601.0, ..Default::default() };
        assert_eq!(
            session_continue(&SessionStop::TimeBudget { t: 600.0 }, &c),
            SessionVerdict::Abandon(AbandonReason::TimeBudget)
        );

        let c = SessionCounters { out_of_queries: true, ..Default::default() };
        assert_eq!(
            session_continue(&SessionStop::MaxQueries { n: 99 }, &c),
            SessionVerdict::Abandon(AbandonReason::OutOfQueries)
        );
    }

    #[test]
    fn combined_rule_dominates_components() {
        // Satisfaction-or-frustration fires no later than either alone.
        let sat = QueryStop::Satisfaction { n: 2 };
        let frus = QueryStop::TotalNonrel { n: 3 };
        let both = QueryStop::SatisfactionOrFrustration { n_sat: 2, n_frus: 3 };
        let grades = [0, 2, 0, 2, 0, 0, 0];
        let mut s_state = QueryState::new();
        let mut f_state = QueryState::new();
        let mut b_state = QueryState::new();
        let mut sat_at = None;
        let mut frus_at = None;
        let mut both_at = None;
        for (i, &g) in grades.iter().enumerate() {
            s_state.record_examined(i + 1, g);
            f_state.record_examined(i + 1, g);
            b_state.record_examined(i + 1, g);
            if sat_at.is_none() && stop_decision(&sat, &s_state, &[]) != StopVerdict::Continue {
                sat_at = Some(i);
            }
            if frus_at.is_none() && stop_decision(&frus, &f_state, &[]) != StopVerdict::Continue {
                frus_at = Some(i);
            }
            if both_at.is_none() && stop_decision(&both, &b_state, &[]) != StopVerdict::Continue {
                both_at = Some(i);
            }
        }
        let earliest = sat_at.min(frus_at);
        assert_eq!(both_at, earliest);
    }
}
