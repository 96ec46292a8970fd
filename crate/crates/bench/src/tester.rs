use simseek_core::session::UserProfile;
use simseek_core::Scalar;

use crate::config::SystemSpec;
use crate::metric::MetricSpec;
use crate::sweep::{cell_mean, LoadedCorpus, RunSpec};
use crate::BenchError;

/// A system pair with an expected performance ordering (A beats B); used to
/// audit whether a simulated user can tell the systems apart.
#[derive(Debug, Clone, PartialEq)]
pub struct Tester {
    pub name: String,
    pub system_a: String,
    pub system_b: String,
    pub metric: MetricSpec,
    /// One-sided confidence level for the paired sign test.
    pub confidence: Scalar,
}

impl Tester {
    /// Parse a testers file: one tester per line,
    /// `name: A > B metric=gain confidence=0.95`.
    pub fn parse_file(text: &str) -> Result<Vec<Tester>, BenchError> {
        let mut testers = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, rest) = line
                .split_once(':')
                .ok_or_else(|| BenchError::Config(format!("tester line missing `:`: {line}")))?;
            let mut system_a = None;
            let mut system_b = None;
            let mut metric = MetricSpec::Gain;
            let mut confidence = 0.95;
            for token in rest.split_whitespace() {
                if token == ">" {
                    continue;
                }
                if let Some(v) = token.strip_prefix("metric=") {
                    metric = MetricSpec::parse(v)?;
                } else if let Some(v) = token.strip_prefix("confidence=") {
                    confidence = v.parse().map_err(|_| {
                        BenchError::Config(format!("bad confidence in tester `{name}`"))
                    })?;
                } else if system_a.is_none() {
                    system_a = Some(token.to_string());
                } else if system_b.is_none() {
                    system_b = Some(token.to_string());
                }
            }
            let (system_a, system_b) = match (system_a, system_b) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(BenchError::Config(format!(
                        "tester `{name}` needs `A > B`"
                    )))
                }
            };
            if system_a == system_b {
                return Err(BenchError::Config(format!(
                    "tester `{}` compares a system against itself",
                    name.trim()
                )));
            }
            testers.push(Tester {
                name: name.trim().to_string(),
                system_a,
                system_b,
                metric,
                confidence,
            });
        }
        Ok(testers)
    }
}

/// Verdict of one tester for one user.
#[derive(Debug, Clone, PartialEq)]
pub struct TesterOutcome {
    pub tester: String,
    pub pass: bool,
    pub mean_a: Scalar,
    pub mean_b: Scalar,
    /// One-sided sign-test p-value for "A beats B".
    pub p_value: Scalar,
    pub wins_a: usize,
    pub wins_b: usize,
    pub ties: usize,
}

/// Environment a tester evaluation runs in.
pub struct TesterEnv<'a> {
    pub corpus: &'a LoadedCorpus,
    pub systems: &'a [SystemSpec],
    pub runs: usize,
    pub seed: u64,
    pub budget: Scalar,
}

/// Pass rate of a user over a set of testers.
///
/// Per tester, both systems run over every topic; the verdict is a paired
/// one-sided sign test over per-topic means, passing when the observed order
/// matches the expected one at the tester's confidence.
pub fn tester_pass_rate(
    user: &UserProfile,
    testers: &[Tester],
    env: &TesterEnv,
) -> Result<(Scalar, Vec<TesterOutcome>), BenchError> {
    if testers.is_empty() {
        return Err(BenchError::Config("no testers supplied".into()));
    }
    let mut outcomes = Vec::new();
    for tester in testers {
        let find = |name: &str| {
            env.systems
                .iter()
                .find(|s| s.name == name)
                .ok_or_else(|| BenchError::Unresolved { kind: "system", name: name.to_string() })
        };
        let a = find(&tester.system_a)?;
        let b = find(&tester.system_b)?;
        let mut wins_a = 0usize;
        let mut wins_b = 0usize;
        let mut ties = 0usize;
        let mut sum_a = 0.0;
        let mut sum_b = 0.0;
        for topic in &env.corpus.topics {
            let mean = |system: &SystemSpec| {
                let spec = RunSpec { runs: env.runs, seed: env.seed, budget: env.budget };
                cell_mean(user, topic, system, env.corpus, &tester.metric, &spec)
            };
            let va = mean(a)?;
            let vb = mean(b)?;
            sum_a += va;
            sum_b += vb;
            if va > vb {
                wins_a += 1;
            } else if vb > va {
                wins_b += 1;
            } else {
                ties += 1;
            }
        }
        let n = wins_a + wins_b;
        let p_value = if n == 0 { 1.0 } else { binomial_upper_tail(n, wins_a) };
        let topics = env.corpus.topics.len().max(1) as Scalar;
        outcomes.push(TesterOutcome {
            tester: tester.name.clone(),
            pass: p_value <= 1.0 - tester.confidence,
            mean_a: sum_a / topics,
            mean_b: sum_b / topics,
            p_value,
            wins_a,
            wins_b,
            ties,
        });
    }
    let rate = outcomes.iter().filter(|o| o.pass).count() as Scalar / outcomes.len() as Scalar;
    Ok((rate, outcomes))
}

/// P(X >= k) for X ~ Binomial(n, 1/2).
fn binomial_upper_tail(n: usize, k: usize) -> Scalar {
    let mut tail = 0.0;
    for i in k..=n {
        tail += binomial_pmf(n, i);
    }
    tail.min(1.0)
}

fn binomial_pmf(n: usize, k: usize) -> Scalar {
    // ln C(n,k) via the log-gamma-free running product; n stays small.
    let mut ln_c = 0.0;
    for i in 0..k {
        ln_c += ((n - i) as Scalar).ln() - ((i + 1) as Scalar).ln();
    }
    (ln_c + (n as Scalar) * (0.5f64).ln()).exp()
}
