use std::collections::BTreeMap;

use simseek_core::corpus::QrelsTable;
use simseek_core::session::{log_summary, InteractionLog};
use simseek_core::Scalar;

use crate::BenchError;

/// Reference behavioural distributions a simulator is validated against.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceStats {
    pub query_length: BTreeMap<usize, Scalar>,
    pub session_length: BTreeMap<usize, Scalar>,
    pub clicks_per_query: BTreeMap<usize, Scalar>,
}

impl ReferenceStats {
    /// Parse the reference file format: `[query-length]`, `[session-length]`,
    /// and `[clicks-per-query]` sections of `value = probability` lines.
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut stats = ReferenceStats::default();
        let mut current: Option<&mut BTreeMap<usize, Scalar>> = None;
        let mut query_length = BTreeMap::new();
        let mut session_length = BTreeMap::new();
        let mut clicks = BTreeMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "[query-length]" => current = Some(&mut query_length),
                "[session-length]" => current = Some(&mut session_length),
                "[clicks-per-query]" => current = Some(&mut clicks),
                _ => {
                    let (k, v) = line.split_once('=').ok_or_else(|| {
                        BenchError::Config(format!("reference line needs `=`: {line}"))
                    })?;
                    let key: usize = k.trim().parse().map_err(|_| {
                        BenchError::Config(format!("bad reference key `{k}`"))
                    })?;
                    let prob: Scalar = v.trim().parse().map_err(|_| {
                        BenchError::Config(format!("bad reference probability `{v}`"))
                    })?;
                    let target = current.as_deref_mut().ok_or_else(|| {
                        BenchError::Config("reference entry before any section".into())
                    })?;
                    target.insert(key, prob);
                }
            }
        }
        stats.query_length = query_length;
        stats.session_length = session_length;
        stats.clicks_per_query = clicks;
        for (name, pmf) in [
            ("query-length", &stats.query_length),
            ("session-length", &stats.session_length),
            ("clicks-per-query", &stats.clicks_per_query),
        ] {
            if !pmf.is_empty() {
                let total: Scalar = pmf.values().sum();
                if (total - 1.0).abs() > 1e-6 {
                    return Err(BenchError::Config(format!(
                        "[{name}] sums to {total}, must be 1"
                    )));
                }
            }
        }
        Ok(stats)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, pmf) in [
            ("query-length", &self.query_length),
            ("session-length", &self.session_length),
            ("clicks-per-query", &self.clicks_per_query),
        ] {
            out.push_str(&format!("[{name}]\n"));
            for (k, p) in pmf {
                out.push_str(&format!("{k} = {p}\n"));
            }
        }
        out
    }
}

/// Divergences between simulated behaviour and the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub query_length_js: Scalar,
    pub session_length_js: Scalar,
    pub clicks_per_query_js: Scalar,
    /// Statistics whose divergence exceeded the threshold.
    pub flagged: Vec<String>,
    pub threshold: Scalar,
}

impl DivergenceReport {
    pub fn all_within(&self) -> bool {
        self.flagged.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::from("statistic\tjs-divergence\tflagged\n");
        for (name, value) in [
            ("query-length", self.query_length_js),
            ("session-length", self.session_length_js),
            ("clicks-per-query", self.clicks_per_query_js),
        ] {
            let flagged = self.flagged.iter().any(|f| f == name);
            out.push_str(&format!("{name}\t{value:.6}\t{flagged}\n"));
        }
        out
    }
}

/// Compare the behavioural statistics of simulated logs against reference
/// pmfs; each statistic's Jensen-Shannon divergence (nats) is reported and
/// flagged when above `threshold`. Empty reference sections are skipped.
pub fn compare_behavior_stats(
    logs: &[InteractionLog],
    qrels: &QrelsTable,
    reference: &ReferenceStats,
    threshold: Scalar,
) -> Result<DivergenceReport, BenchError> {
    let mut query_lengths: BTreeMap<usize, usize> = BTreeMap::new();
    let mut session_lengths: BTreeMap<usize, usize> = BTreeMap::new();
    let mut clicks_per_query: BTreeMap<usize, usize> = BTreeMap::new();
    for log in logs {
        let summary = log_summary(log, qrels)?;
        *session_lengths.entry(summary.queries).or_insert(0) += 1;
        for len in summary.query_lengths {
            *query_lengths.entry(len).or_insert(0) += 1;
        }
        for clicks in summary.clicks_per_query {
            *clicks_per_query.entry(clicks).or_insert(0) += 1;
        }
    }

    let mut flagged = Vec::new();
    let mut divergence = |name: &str,
                          observed: &BTreeMap<usize, usize>,
                          reference: &BTreeMap<usize, Scalar>|
     -> Scalar {
        if reference.is_empty() {
            return 0.0;
        }
        let d = js_divergence_counts(observed, reference);
        if d > threshold {
            flagged.push(name.to_string());
        }
        d
    };
    let query_length_js = divergence("query-length", &query_lengths, &reference.query_length);
    let session_length_js =
        divergence("session-length", &session_lengths, &reference.session_length);
    let clicks_per_query_js =
        divergence("clicks-per-query", &clicks_per_query, &reference.clicks_per_query);
    Ok(DivergenceReport {
        query_length_js,
        session_length_js,
        clicks_per_query_js,
        flagged,
        threshold,
    })
}

/// Jensen-Shannon divergence between an observed count histogram and a
/// reference pmf, in nats (bounded by ln 2).
pub fn js_divergence_counts(
    observed: &BTreeMap<usize, usize>,
    reference: &BTreeMap<usize, Scalar>,
) -> Scalar {
    let total: usize = observed.values().sum();
    if total == 0 {
        return std::f64::consts::LN_2;
    }
    let keys: std::collections::BTreeSet<usize> =
        observed.keys().chain(reference.keys()).copied().collect();
    let mut js = 0.0;
    for k in keys {
        let p = observed.get(&k).copied().unwrap_or(0) as Scalar / total as Scalar;
        let q = reference.get(&k).copied().unwrap_or(0.0);
        let m = 0.5 * (p + q);
        if p > 0.0 {
            js += 0.5 * p * (p / m).ln();
        }
        if q > 0.0 {
            js += 0.5 * q * (q / m).ln();
        }
    }
    js
}
