use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MeasureError;
use crate::corpus::{QrelsTable, Topic};
use crate::session::{run_session, EventKind, InteractionLog, SessionError, SystemUnderTest, UserProfile};
use crate::{Grade, Scalar};

/// Interaction reward, cost, and their combination for one session.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardCost {
    /// Cumulated gain over docs the user judged relevant.
    pub reward: Scalar,
    /// Total session seconds.
    pub cost: Scalar,
    /// `reward - tau * cost`.
    pub utility: Scalar,
}

/// Score one interaction log: reward is the summed gain of judged-relevant
/// documents (via `gain_of` on their ground-truth grade), cost is the total
/// time, and the single-number utility trades them off with `tau`.
///
/// Each document's gain counts once; re-finding a document later in the
/// session costs time but adds no reward.
pub fn session_reward_cost(
    log: &InteractionLog,
    gain_of: impl Fn(Grade) -> Scalar,
    tau: Scalar,
) -> Result<RewardCost, MeasureError> {
    log.validate().map_err(|e| MeasureError::MalformedLog(e.to_string()))?;
    let mut reward = 0.0;
    let mut seen = std::collections::BTreeSet::new();
    for event in log.events() {
        if let EventKind::DocJudged { doc, rel: true, grade } = &event.kind {
            if seen.insert(doc.clone()) {
                reward += gain_of(*grade);
            }
        }
    }
    let cost = log.total_cost();
    Ok(RewardCost { reward, cost, utility: reward - tau * cost })
}

/// Monte-Carlo estimate of a log metric's expectation over sessions.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub mean: Scalar,
    /// Standard error of the mean (sample sd over sqrt(n)).
    pub stderr: Scalar,
    pub values: Vec<Scalar>,
}

/// Estimate the expected value of `metric` over the session distribution of
/// (profile, topic, system), one independent session per seed.
///
/// Panics if fewer than two seeds are supplied; the standard error is
/// undefined otherwise.
pub fn simulator_expectation(
    metric: impl Fn(&InteractionLog) -> Scalar,
    profile: &UserProfile,
    topic: &Topic,
    system: &SystemUnderTest,
    qrels: &QrelsTable,
    budget: Scalar,
    seeds: &[u64],
) -> Result<Expectation, SessionError> {
    assert!(seeds.len() >= 2, "simulator_expectation needs at least two runs");
    let mut values = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log = run_session(profile, topic, system, qrels, budget, &mut rng)?;
        values.push(metric(&log));
    }
    let n = values.len() as Scalar;
    let mean = values.iter().sum::<Scalar>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<Scalar>() / (n - 1.0);
    let stderr = (var / n).sqrt();
    Ok(Expectation { mean, stderr, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_log() -> InteractionLog {
        let mut log = InteractionLog::new();
        log.push(0.0, EventKind::SessionStart { topic: "1".into() });
        log.push(10.0, EventKind::QueryIssued { query: vec!["q".into()] });
        log.push(12.0, EventKind::SerpShown { results: 2 });
        log.push(14.0, EventKind::SnippetExamined { rank: 1, grade: 2 });
        log.push(14.0, EventKind::Click { doc: "d1".into() });
        log.push(30.0, EventKind::DocJudged { doc: "d1".into(), rel: true, grade: 2 });
        log.push(32.0, EventKind::SnippetExamined { rank: 2, grade: 3 });
        log.push(32.0, EventKind::Click { doc: "d2".into() });
        log.push(60.0, EventKind::DocJudged { doc: "d2".into(), rel: true, grade: 3 });
        log.push(60.0, EventKind::StopQuery { reason: "satisfaction".into() });
        log.push(60.0, EventKind::SessionEnd { reason: "satisfaction".into() });
        log
    }

    #[test]
    fn reward_cost_fixture_arithmetic() {
        let rc = session_reward_cost(&fixture_log(), |g| g as Scalar, 0.01).unwrap();
        assert_eq!(rc.reward, 5.0);
        assert_eq!(rc.cost, 60.0);
        assert!((rc.utility - 4.4).abs() < 1e-12);
    }

    #[test]
    fn empty_session_scores_zero() {
        let mut log = InteractionLog::new();
        log.push(0.0, EventKind::SessionStart { topic: "1".into() });
        log.push(0.0, EventKind::SessionEnd { reason: "budget".into() });
        let rc = session_reward_cost(&log, |g| g as Scalar, 0.5).unwrap();
        assert_eq!(rc.reward, 0.0);
        assert_eq!(rc.cost, 0.0);
        assert_eq!(rc.utility, 0.0);
    }

    #[test]
    fn reward_prefix_monotonicity() {
        // Reward over any prefix of the log never decreases.
        let log = fixture_log();
        let mut last = 0.0;
        for cut in 2..=log.events().len() {
            let mut prefix = InteractionLog::new();
            for e in &log.events()[..cut - 1] {
                prefix.push(e.time, e.kind.clone());
            }
            prefix.push(
                log.events()[cut - 1].time,
                EventKind::SessionEnd { reason: "cut".into() },
            );
            let rc = session_reward_cost(&prefix, |g| g as Scalar, 0.0).unwrap();
            assert!(rc.reward >= last);
            last = rc.reward;
        }
    }
}
