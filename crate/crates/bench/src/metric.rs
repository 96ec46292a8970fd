use simseek_core::corpus::QrelsTable;
use simseek_core::engine::{search, Index, ScorerSpec};
use simseek_core::measures::{
    average_precision, dcg_at, err, ndcg_at, precision_at, rbp, sdcg, session_reward_cost,
    Ranking,
};
use simseek_core::session::{EventKind, InteractionLog};
use simseek_core::{Query, Scalar};

use crate::BenchError;

/// A metric computable from a session log (plus the system it ran against).
///
/// Ranking measures are evaluated on the first query's result list; `sdcg`
/// spans every query in the session.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    /// Session cumulated gain: summed ground-truth grades of judged-relevant
    /// docs.
    Gain,
    /// `gain - tau * cost`.
    Utility { tau: Scalar },
    /// Total session seconds.
    Cost,
    Queries,
    Clicks,
    Examined,
    PrecisionAt(usize),
    AveragePrecision,
    DcgAt(usize),
    NdcgAt(usize),
    Rbp { p: Scalar },
    Err,
    Sdcg { b: Scalar, bq: Scalar, k: usize },
}

impl MetricSpec {
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let bad = |m: &str| BenchError::Config(format!("unknown metric `{m}`"));
        if let Some((head, arg)) = text.split_once('@') {
            let k: usize =
                arg.parse().map_err(|_| BenchError::Config(format!("bad depth in `{text}`")))?;
            return match head {
                "p" => Ok(MetricSpec::PrecisionAt(k)),
                "dcg" => Ok(MetricSpec::DcgAt(k)),
                "ndcg" => Ok(MetricSpec::NdcgAt(k)),
                _ => Err(bad(text)),
            };
        }
        if let Some((head, arg)) = text.split_once(':') {
            return match head {
                "rbp" => Ok(MetricSpec::Rbp {
                    p: arg.parse().map_err(|_| BenchError::Config(format!("bad p in `{text}`")))?,
                }),
                "utility" => Ok(MetricSpec::Utility {
                    tau: arg
                        .parse()
                        .map_err(|_| BenchError::Config(format!("bad tau in `{text}`")))?,
                }),
                "sdcg" => {
                    let parts: Vec<&str> = arg.split(',').collect();
                    if parts.len() != 3 {
                        return Err(BenchError::Config("sdcg:b,bq,k".into()));
                    }
                    Ok(MetricSpec::Sdcg {
                        b: parts[0].parse().map_err(|_| bad(text))?,
                        bq: parts[1].parse().map_err(|_| bad(text))?,
                        k: parts[2].parse().map_err(|_| bad(text))?,
                    })
                }
                _ => Err(bad(text)),
            };
        }
        match text {
            "gain" => Ok(MetricSpec::Gain),
            "utility" => Ok(MetricSpec::Utility { tau: 0.01 }),
            "cost" => Ok(MetricSpec::Cost),
            "queries" => Ok(MetricSpec::Queries),
            "clicks" => Ok(MetricSpec::Clicks),
            "examined" => Ok(MetricSpec::Examined),
            "ap" => Ok(MetricSpec::AveragePrecision),
            "err" => Ok(MetricSpec::Err),
            _ => Err(bad(text)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            MetricSpec::Gain => "gain".into(),
            MetricSpec::Utility { tau } => format!("utility:{tau}"),
            MetricSpec::Cost => "cost".into(),
            MetricSpec::Queries => "queries".into(),
            MetricSpec::Clicks => "clicks".into(),
            MetricSpec::Examined => "examined".into(),
            MetricSpec::PrecisionAt(k) => format!("p@{k}"),
            MetricSpec::AveragePrecision => "ap".into(),
            MetricSpec::DcgAt(k) => format!("dcg@{k}"),
            MetricSpec::NdcgAt(k) => format!("ndcg@{k}"),
            MetricSpec::Rbp { p } => format!("rbp:{p}"),
            MetricSpec::Err => "err".into(),
            MetricSpec::Sdcg { b, bq, k } => format!("sdcg:{b},{bq},{k}"),
        }
    }
}

/// Everything needed to score a log after the fact.
pub struct MetricContext<'a> {
    pub index: &'a Index,
    pub scorer: &'a ScorerSpec,
    pub k: usize,
    pub qrels: &'a QrelsTable,
    pub topic_id: &'a str,
}

impl MetricContext<'_> {
    /// Re-run the system for a logged query and grade its ranking.
    fn ranking_for(&self, query: &Query) -> Ranking {
        let serp = search(self.index, query, self.scorer, self.k);
        let grades: Vec<i32> = serp
            .snippets
            .iter()
            .map(|s| self.qrels.grade(self.topic_id, &s.doc_id))
            .collect();
        let mut ideal: Vec<i32> = self
            .qrels
            .judged(self.topic_id)
            .map(|(_, g)| g)
            .filter(|&g| g >= 1)
            .collect();
        ideal.sort_unstable_by(|a, b| b.cmp(a));
        Ranking::with_ideal(grades, ideal)
    }

    fn session_rankings(&self, log: &InteractionLog) -> Vec<Ranking> {
        log.events()
            .iter()
            .filter_map(|e| match &e.kind {
                EventKind::QueryIssued { query } => Some(self.ranking_for(query)),
                _ => None,
            })
            .collect()
    }
}

/// Evaluate one metric on one log.
pub fn evaluate(
    metric: &MetricSpec,
    log: &InteractionLog,
    ctx: &MetricContext,
) -> Result<Scalar, BenchError> {
    let count = |pred: &dyn Fn(&EventKind) -> bool| {
        log.events().iter().filter(|e| pred(&e.kind)).count() as Scalar
    };
    Ok(match metric {
        MetricSpec::Gain => session_reward_cost(log, |g| g as Scalar, 0.0)?.reward,
        MetricSpec::Utility { tau } => session_reward_cost(log, |g| g as Scalar, *tau)?.utility,
        MetricSpec::Cost => log.total_cost(),
        MetricSpec::Queries => count(&|k| matches!(k, EventKind::QueryIssued { .. })),
        MetricSpec::Clicks => count(&|k| matches!(k, EventKind::Click { .. })),
        MetricSpec::Examined => count(&|k| matches!(k, EventKind::SnippetExamined { .. })),
        MetricSpec::PrecisionAt(k) => first_ranking(log, ctx)
            .map(|r| precision_at::<Scalar>(&r, *k))
            .unwrap_or(0.0),
        MetricSpec::AveragePrecision => first_ranking(log, ctx)
            .map(|r| average_precision::<Scalar>(&r))
            .unwrap_or(0.0),
        MetricSpec::DcgAt(k) => {
            first_ranking(log, ctx).map(|r| dcg_at::<Scalar>(&r, *k)).unwrap_or(0.0)
        }
        MetricSpec::NdcgAt(k) => {
            first_ranking(log, ctx).map(|r| ndcg_at::<Scalar>(&r, *k)).unwrap_or(0.0)
        }
        MetricSpec::Rbp { p } => {
            first_ranking(log, ctx).map(|r| rbp(&r, *p, 3)).unwrap_or(0.0)
        }
        MetricSpec::Err => first_ranking(log, ctx).map(|r| err::<Scalar>(&r, 3)).unwrap_or(0.0),
        MetricSpec::Sdcg { b, bq, k } => {
            let rankings = ctx.session_rankings(log);
            if rankings.is_empty() {
                0.0
            } else {
                sdcg(&rankings, *b, *bq, *k)?
            }
        }
    })
}

fn first_ranking(log: &InteractionLog, ctx: &MetricContext) -> Option<Ranking> {
    log.events().iter().find_map(|e| match &e.kind {
        EventKind::QueryIssued { query } => Some(ctx.ranking_for(query)),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips_names() {
        for text in ["gain", "cost", "p@5", "ndcg@10", "rbp:0.8", "err", "utility:0.02"] {
            let m = MetricSpec::parse(text).unwrap();
            assert_eq!(m.name(), text);
        }
        assert!(MetricSpec::parse("bogus").is_err());
    }
}
