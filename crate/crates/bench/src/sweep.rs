use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use simseek_core::corpus::{QrelsTable, Topic};
use simseek_core::engine::Index;
use simseek_core::hash::Fnv1a;
use simseek_core::session::{run_session, InteractionLog, SystemUnderTest, UserProfile};
use simseek_core::Scalar;

use crate::config::{ExperimentConfig, SystemSpec};
use crate::metric::{evaluate, MetricContext, MetricSpec};
use crate::BenchError;

/// Loaded test collection backing a sweep.
pub struct LoadedCorpus {
    pub index: Index,
    pub topics: Vec<Topic>,
    pub qrels: QrelsTable,
}

/// One CSV row: a metric value for a (topic, system, user, run) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub topic: String,
    pub system: String,
    pub user: String,
    pub run: usize,
    pub metric: String,
    pub value: Scalar,
}

/// Everything a sweep produces, before any file is written.
pub struct SweepOutput {
    pub rows: Vec<MetricRow>,
    /// Session logs keyed by their file name.
    pub logs: BTreeMap<String, InteractionLog>,
}

impl SweepOutput {
    /// Render the metric rows as CSV, header included; fully deterministic.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("topic,system,user,run,metric,value\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{:.6}\n",
                row.topic, row.system, row.user, row.run, row.metric, row.value
            ));
        }
        out
    }

    /// Human-readable per-(system, user, metric) means over topics and runs.
    pub fn report(&self) -> String {
        let mut acc: BTreeMap<(String, String, String), (Scalar, usize)> = BTreeMap::new();
        for row in &self.rows {
            let entry = acc
                .entry((row.system.clone(), row.user.clone(), row.metric.clone()))
                .or_insert((0.0, 0));
            entry.0 += row.value;
            entry.1 += 1;
        }
        let mut out = String::from("system\tuser\tmetric\tmean\tcells\n");
        for ((system, user, metric), (sum, n)) in acc {
            out.push_str(&format!(
                "{system}\t{user}\t{metric}\t{:.6}\t{n}\n",
                sum / n as Scalar
            ));
        }
        out
    }
}

/// Derive the per-cell seed from the global seed and the cell coordinates.
pub fn cell_seed(global: u64, user: &str, topic: &str, system: &str, run: usize) -> u64 {
    let mut h = Fnv1a::new();
    h.write_u64(global)
        .write_str(user)
        .write_str(topic)
        .write_str(system)
        .write_u64(run as u64);
    h.finish()
}

/// File name of one cell's session log.
pub fn log_name(topic: &str, system: &str, user: &str, run: usize) -> String {
    format!("{topic}__{system}__{user}__run{run}.log")
}

/// Run every (user, topic, system) cell `runs` times and score the logs.
///
/// Cells execute in sorted order with seeds derived per cell, so re-running
/// the same config and seed reproduces the output byte for byte.
pub fn run_sweep(
    config: &ExperimentConfig,
    corpus: &LoadedCorpus,
) -> Result<SweepOutput, BenchError> {
    let mut rows = Vec::new();
    let mut logs = BTreeMap::new();

    let mut topics: Vec<&Topic> = corpus.topics.iter().collect();
    topics.sort_by(|a, b| a.id.cmp(&b.id));
    let mut systems: Vec<&SystemSpec> = config.systems.iter().collect();
    systems.sort_by(|a, b| a.name.cmp(&b.name));
    let mut users: Vec<&UserProfile> = config.users.iter().collect();
    users.sort_by(|a, b| a.name.cmp(&b.name));

    for topic in &topics {
        for system in &systems {
            for user in &users {
                for run in 0..config.runs {
                    let seed = cell_seed(config.seed, &user.name, &topic.id, &system.name, run);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let sut = SystemUnderTest {
                        index: &corpus.index,
                        scorer: system.scorer.clone(),
                        k: system.k,
                    };
                    let log = run_session(
                        user,
                        topic,
                        &sut,
                        &corpus.qrels,
                        config.budget,
                        &mut rng,
                    )?;
                    let ctx = MetricContext {
                        index: &corpus.index,
                        scorer: &system.scorer,
                        k: system.k,
                        qrels: &corpus.qrels,
                        topic_id: &topic.id,
                    };
                    for metric in &config.metrics {
                        rows.push(MetricRow {
                            topic: topic.id.clone(),
                            system: system.name.clone(),
                            user: user.name.clone(),
                            run,
                            metric: metric.name(),
                            value: evaluate(metric, &log, &ctx)?,
                        });
                    }
                    logs.insert(log_name(&topic.id, &system.name, &user.name, run), log);
                }
            }
        }
    }
    Ok(SweepOutput { rows, logs })
}

/// How many runs a cell gets, under which global seed and budget.
#[derive(Debug, Clone, Copy)]
pub struct RunSpec {
    pub runs: usize,
    pub seed: u64,
    pub budget: Scalar,
}

/// Mean of one metric over all runs of a (user, topic, system) cell.
pub fn cell_mean(
    user: &UserProfile,
    topic: &Topic,
    system: &SystemSpec,
    corpus: &LoadedCorpus,
    metric: &MetricSpec,
    spec: &RunSpec,
) -> Result<Scalar, BenchError> {
    let mut total = 0.0;
    for run in 0..spec.runs {
        let seed = cell_seed(spec.seed, &user.name, &topic.id, &system.name, run);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sut = SystemUnderTest {
            index: &corpus.index,
            scorer: system.scorer.clone(),
            k: system.k,
        };
        let log = run_session(user, topic, &sut, &corpus.qrels, spec.budget, &mut rng)?;
        let ctx = MetricContext {
            index: &corpus.index,
            scorer: &system.scorer,
            k: system.k,
            qrels: &corpus.qrels,
            topic_id: &topic.id,
        };
        total += evaluate(metric, &log, &ctx)?;
    }
    Ok(total / spec.runs.max(1) as Scalar)
}
