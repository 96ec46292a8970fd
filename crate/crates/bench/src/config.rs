use std::collections::BTreeMap;

use simseek_core::behavior::{
    ClickModel, CostModel, GradeProbTable, JudgeModel, PositionCurve, QueryStop, ScanModel,
    ScentModel, SessionStop, SimilarityMetric,
};
use simseek_core::engine::{ScorerSpec, SnippetMode};
use simseek_core::querysim::{
    AdhocSpec, DocPrior, KnownItemSpec, LengthPmf, PreParams, ReformulationStrategy, TermModel,
    TopicSource,
};
use simseek_core::session::{QuerySpec, UserProfile};
use simseek_core::Scalar;

use crate::metric::MetricSpec;
use crate::BenchError;

/// One retrieval system entry: a scorer plus its page size.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub name: String,
    pub scorer: ScorerSpec,
    pub k: usize,
}

/// Parsed experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub docs_path: String,
    pub topics_path: String,
    pub qrels_path: String,
    pub systems: Vec<SystemSpec>,
    pub users: Vec<UserProfile>,
    pub runs: usize,
    pub seed: u64,
    pub budget: Scalar,
    pub metrics: Vec<MetricSpec>,
}

/// Parse the sectioned key=value config format:
///
/// ```text
/// [corpus]
/// docs = corpus/docs.tsv
/// topics = corpus/topics.txt
/// qrels = corpus/qrels.txt
///
/// [systems]
/// bm25 = bm25(1.2,0.75) k=10
/// rand = random(7) k=10
///
/// [users]
/// base = query=strategy:S4 scan=fixed:10 click=perfect judge=threshold:1
///        stop=satisfaction:2 session=max-queries:5 scent=always
///
/// [budget]
/// seconds = 600
/// runs = 3
/// seed = 42
///
/// [metrics]
/// list = gain,utility:0.01,p@10,ndcg@10
/// ```
///
/// User definitions may continue over indented lines.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, BenchError> {
    let sections = split_sections(text)?;
    let corpus = sections
        .get("corpus")
        .ok_or_else(|| BenchError::Config("missing [corpus] section".into()))?;
    let get = |map: &BTreeMap<String, String>, key: &str, section: &str| {
        map.get(key)
            .cloned()
            .ok_or_else(|| BenchError::Config(format!("missing `{key}` in [{section}]")))
    };

    let mut systems = Vec::new();
    for (name, spec) in sections.get("systems").into_iter().flatten() {
        systems.push(parse_system(name, spec)?);
    }
    if systems.is_empty() {
        return Err(BenchError::Config("no systems configured".into()));
    }

    let mut users = Vec::new();
    for (name, spec) in sections.get("users").into_iter().flatten() {
        users.push(parse_user(name, spec)?);
    }
    if users.is_empty() {
        return Err(BenchError::Config("no users configured".into()));
    }

    let budget_section = sections.get("budget").cloned().unwrap_or_default();
    let runs: usize = budget_section.get("runs").map(|v| v.parse()).transpose().map_err(|_| {
        BenchError::Config("runs must be an integer".into())
    })?.unwrap_or(1);
    if runs == 0 {
        return Err(BenchError::Config("runs must be >= 1".into()));
    }
    let seed: u64 = budget_section
        .get("seed")
        .map(|v| v.parse())
        .transpose()
        .map_err(|_| BenchError::Config("seed must be an integer".into()))?
        .unwrap_or(0);
    let budget: Scalar = budget_section
        .get("seconds")
        .map(|v| v.parse())
        .transpose()
        .map_err(|_| BenchError::Config("seconds must be a number".into()))?
        .unwrap_or(600.0);

    let metrics = match sections.get("metrics").and_then(|m| m.get("list")) {
        Some(list) => list
            .split(',')
            .map(|m| MetricSpec::parse(m.trim()))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![MetricSpec::Gain, MetricSpec::Cost],
    };

    Ok(ExperimentConfig {
        docs_path: get(corpus, "docs", "corpus")?,
        topics_path: get(corpus, "topics", "corpus")?,
        qrels_path: get(corpus, "qrels", "corpus")?,
        systems,
        users,
        runs,
        seed,
        budget,
        metrics,
    })
}

fn split_sections(
    text: &str,
) -> Result<BTreeMap<String, BTreeMap<String, String>>, BenchError> {
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current: Option<String> = None;
    let mut last_key: Option<(String, String)> = None;
    for raw in text.lines() {
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        if line.trim().starts_with('[') {
            let name = line.trim().trim_matches(|c| c == '[' || c == ']').to_string();
            current = Some(name.clone());
            sections.entry(name).or_default();
            last_key = None;
            continue;
        }
        let section = current
            .clone()
            .ok_or_else(|| BenchError::Config(format!("key before any section: {line}")))?;
        if line.starts_with(char::is_whitespace) {
            // Continuation of the previous value.
            if let Some((sec, key)) = &last_key {
                let entry = sections
                    .get_mut(sec)
                    .and_then(|m| m.get_mut(key))
                    .expect("continuation follows an entry");
                entry.push(' ');
                entry.push_str(line.trim());
                continue;
            }
            return Err(BenchError::Config(format!("stray continuation line: {line}")));
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| BenchError::Config(format!("expected key = value: {line}")))?;
        let key = key.trim().to_string();
        sections
            .get_mut(&section)
            .expect("section exists")
            .insert(key.clone(), value.trim().to_string());
        last_key = Some((section, key));
    }
    Ok(sections)
}

/// Parse a system line like `bm25(1.2,0.75) k=10` or `random(7) k=5`.
pub fn parse_system(name: &str, spec: &str) -> Result<SystemSpec, BenchError> {
    let mut scorer = None;
    let mut k = 10usize;
    for token in spec.split_whitespace() {
        if let Some(v) = token.strip_prefix("k=") {
            k = v
                .parse()
                .map_err(|_| BenchError::Config(format!("bad k in system `{name}`")))?;
        } else {
            scorer = Some(parse_scorer(token)?);
        }
    }
    let scorer =
        scorer.ok_or_else(|| BenchError::Config(format!("system `{name}` has no scorer")))?;
    scorer.validate().map_err(BenchError::Engine)?;
    if k == 0 {
        return Err(BenchError::Config(format!("system `{name}` needs k >= 1")));
    }
    Ok(SystemSpec { name: name.to_string(), scorer, k })
}

fn parse_scorer(token: &str) -> Result<ScorerSpec, BenchError> {
    let (head, args) = split_call(token);
    match head {
        "tfidf" => Ok(ScorerSpec::TfIdf),
        "boolean-and" | "boolean" => Ok(ScorerSpec::BooleanAnd),
        "bm25" => {
            let parts = parse_floats(&args, 2, "bm25(k1,b)")?;
            Ok(ScorerSpec::Bm25 { k1: parts[0], b: parts[1] })
        }
        "random" => {
            let seed: u64 = args
                .first()
                .and_then(|a| a.parse().ok())
                .ok_or_else(|| BenchError::Config("random(seed) needs a seed".into()))?;
            Ok(ScorerSpec::Random { seed })
        }
        other => Err(BenchError::Config(format!("unknown scorer `{other}`"))),
    }
}

fn split_call(token: &str) -> (&str, Vec<String>) {
    match token.split_once('(') {
        Some((head, rest)) => {
            let inner = rest.trim_end_matches(')');
            let args = inner
                .split(',')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect();
            (head, args)
        }
        None => (token, Vec::new()),
    }
}

fn parse_floats(args: &[String], n: usize, what: &str) -> Result<Vec<Scalar>, BenchError> {
    if args.len() != n {
        return Err(BenchError::Config(format!("{what} takes {n} arguments")));
    }
    args.iter()
        .map(|a| {
            a.parse()
                .map_err(|_| BenchError::Config(format!("{what}: bad number `{a}`")))
        })
        .collect()
}

/// Parse a user preset: whitespace-separated `key=value` settings where each
/// value names a model preset, e.g.
/// `scan=persistent:0.8 click=grade:baskaya2013 stop=frustration:3`.
pub fn parse_user(name: &str, spec: &str) -> Result<UserProfile, BenchError> {
    let mut profile = UserProfile::baseline(name);
    for token in spec.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| BenchError::Config(format!("user `{name}`: bad token `{token}`")))?;
        apply_user_setting(&mut profile, key, value)
            .map_err(|e| BenchError::Config(format!("user `{name}`: {e}")))?;
    }
    Ok(profile)
}

fn apply_user_setting(profile: &mut UserProfile, key: &str, value: &str) -> Result<(), String> {
    let (head, arg) = match value.split_once(':') {
        Some((h, a)) => (h, a),
        None => (value, ""),
    };
    let num = |s: &str| s.parse::<Scalar>().map_err(|_| format!("bad number `{s}`"));
    let int = |s: &str| s.parse::<usize>().map_err(|_| format!("bad integer `{s}`"));
    let pos = |s: &str| match int(s) {
        Ok(0) => Err(format!("`{s}` must be >= 1")),
        other => other,
    };
    let prob = |s: &str| match num(s) {
        Ok(p) if (0.0..1.0).contains(&p) => Ok(p),
        Ok(p) => Err(format!("probability {p} outside [0, 1)")),
        Err(e) => Err(e),
    };
    match key {
        "query" => {
            profile.query = match head {
                "strategy" => {
                    let mut parts = arg.split(',');
                    let strat = match parts.next().unwrap_or("") {
                        "S1" => ReformulationStrategy::S1,
                        "S2" => ReformulationStrategy::S2,
                        "S3" => ReformulationStrategy::S3,
                        "S4" => ReformulationStrategy::S4,
                        "S5" => ReformulationStrategy::S5,
                        other => return Err(format!("unknown strategy `{other}`")),
                    };
                    let pool = parts.next().map(int).transpose()?.unwrap_or(10);
                    QuerySpec::Strategy { strategy: strat, pool_size: pool }
                }
                "adhoc" => {
                    let mut parts = arg.split(',');
                    let source = match parts.next().unwrap_or("seed") {
                        "frequent" => TopicSource::FrequentTerms,
                        "discriminative" => TopicSource::DiscriminativeTerms,
                        "seed" => TopicSource::SeedQuery,
                        other => return Err(format!("unknown adhoc source `{other}`")),
                    };
                    let lambda = parts.next().map(num).transpose()?.unwrap_or(0.8);
                    if !(0.0..=1.0).contains(&lambda) {
                        return Err(format!("mixture weight {lambda} outside [0, 1]"));
                    }
                    let length = parts.next().map(int).transpose()?.unwrap_or(2);
                    let dynamic = parts.next() == Some("dynamic");
                    QuerySpec::Adhoc(AdhocSpec { source, lambda_mix: lambda, length, dynamic })
                }
                "known-item" => {
                    let length = if arg.is_empty() { 2 } else { int(arg)? };
                    QuerySpec::KnownItem(KnownItemSpec {
                        doc_prior: DocPrior::Uniform,
                        length: LengthPmf::fixed(length),
                        term_model: TermModel::Ml,
                    })
                }
                "pre" => {
                    let mut params = PreParams::default();
                    if !arg.is_empty() {
                        let mut parts = arg.split(',');
                        if let Some(a) = parts.next() {
                            params.alpha = num(a)?;
                        }
                        if let Some(l) = parts.next() {
                            params.lambda_effort = num(l)?;
                        }
                    }
                    QuerySpec::Pre { params, pool_size: 10 }
                }
                other => return Err(format!("unknown query spec `{other}`")),
            };
        }
        "scan" => {
            profile.scan = match head {
                "fixed" => ScanModel::FixedDepth { k: pos(arg)? },
                "persistent" => ScanModel::Persistent { p: prob(arg)? },
                "cascade" => ScanModel::Cascade,
                other => return Err(format!("unknown scan model `{other}`")),
            };
        }
        "click" => {
            profile.click = match (head, arg) {
                ("perfect", _) => ClickModel::PerfectSnippet,
                ("position", "log") | ("position", "") => {
                    ClickModel::Position(PositionCurve::LogInverse)
                }
                ("grade", "baskaya2013") => {
                    ClickModel::GradeCalibrated(GradeProbTable::baskaya2013_click())
                }
                ("grade", "maxwell2015") => {
                    ClickModel::GradeCalibrated(GradeProbTable::maxwell2015_click())
                }
                ("attract", thr) => ClickModel::Attractiveness { threshold: num(thr)? },
                (other, _) => return Err(format!("unknown click model `{other}`")),
            };
        }
        "judge" => {
            profile.judge = match (head, arg) {
                ("threshold", mu) => JudgeModel::Threshold {
                    mu: mu.parse().map_err(|_| format!("bad grade `{mu}`"))?,
                },
                ("grade", "baskaya2013") => {
                    JudgeModel::Stochastic(GradeProbTable::baskaya2013_judge())
                }
                ("grade", "maxwell2015") => {
                    JudgeModel::Stochastic(GradeProbTable::maxwell2015_judge())
                }
                ("lm", mu) => JudgeModel::RelevanceLm { mu: num(mu)? },
                (other, _) => return Err(format!("unknown judge model `{other}`")),
            };
        }
        "stop" => {
            profile.stop.query = match head {
                "fixed" => QueryStop::FixedDepth { k: pos(arg)? },
                "total-nonrel" | "frustration" => QueryStop::TotalNonrel { n: pos(arg)? },
                "contiguous-nonrel" => QueryStop::ContiguousNonrel { n: pos(arg)? },
                "satisfaction" => QueryStop::Satisfaction { n: pos(arg)? },
                "sat-or-frus" => {
                    let mut parts = arg.split(',');
                    QueryStop::SatisfactionOrFrustration {
                        n_sat: pos(parts.next().unwrap_or(""))?,
                        n_frus: pos(parts.next().unwrap_or(""))?,
                    }
                }
                "difference" => {
                    let mut parts = arg.split(',');
                    let theta = num(parts.next().unwrap_or("0.6"))?;
                    let metric = match parts.next() {
                        Some("kl") => SimilarityMetric::Kl,
                        _ => SimilarityMetric::Overlap,
                    };
                    QueryStop::Difference { theta, metric }
                }
                "rate" => {
                    let mut parts = arg.split(',');
                    QueryStop::RateOfGain {
                        theta: num(parts.next().unwrap_or(""))?,
                        min_docs: int(parts.next().unwrap_or("1"))?,
                    }
                }
                "time" => QueryStop::Time { t_max: num(arg)? },
                "time-since-rel" => QueryStop::TimeSinceRel { t: num(arg)? },
                other => return Err(format!("unknown stop rule `{other}`")),
            };
        }
        "session" => {
            profile.stop.session = match head {
                "max-queries" => SessionStop::MaxQueries { n: pos(arg)? },
                "satisfaction" => SessionStop::Satisfaction { n: pos(arg)? },
                "frustration" => SessionStop::Frustration { n: pos(arg)? },
                "time" => SessionStop::TimeBudget { t: num(arg)? },
                other => return Err(format!("unknown session rule `{other}`")),
            };
        }
        "scent" => {
            profile.scent = match head {
                "always" => ScentModel::always(),
                "naive" => ScentModel::naive(),
                "average" => ScentModel::average(),
                "savvy" => ScentModel::savvy(),
                other => return Err(format!("unknown scent preset `{other}`")),
            };
        }
        "mode" => {
            profile.snippet_mode = match head {
                "perfect" => SnippetMode::Perfect,
                "textual" => SnippetMode::Textual,
                other => return Err(format!("unknown snippet mode `{other}`")),
            };
        }
        "cost" => {
            let parts: Vec<&str> = value.split(',').collect();
            if parts.len() != 5 {
                return Err("cost takes 5 numbers: tq,tserp,tsnip,a,b".into());
            }
            profile.cost = CostModel {
                t_query: num(parts[0])?,
                t_serp_entry: num(parts[1])?,
                t_snippet: num(parts[2])?,
                read_rate: num(parts[3])?,
                judge_constant: num(parts[4])?,
            };
        }
        other => return Err(format!("unknown user setting `{other}`")),
    }
    Ok(())
}
