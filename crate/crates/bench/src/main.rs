use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use simseek_bench::config::{parse_config, ExperimentConfig};
use simseek_bench::sweep::{run_sweep, LoadedCorpus};
use simseek_bench::tester::{tester_pass_rate, Tester, TesterEnv};
use simseek_bench::validate::{compare_behavior_stats, ReferenceStats};
use simseek_core::corpus::{parse_documents, parse_qrels, parse_trec_topics};
use simseek_core::engine::build_index;
use simseek_core::measures::{
    average_precision, dcg_at, err, ndcg_at, precision_at, rbp, Ranking,
};
use simseek_core::session::InteractionLog;

/// Simulated users for evaluating interactive information access systems.
#[derive(Parser)]
#[command(name = "simseek", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured sweep and write CSV, logs, and a report.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a TREC run file against qrels with the ranking measures.
    Metrics {
        #[arg(long)]
        qrels: PathBuf,
        /// TREC run format: `topic Q0 doc rank score tag`.
        #[arg(long)]
        ranking: PathBuf,
        /// Evaluation depth for the @k measures.
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
    /// Compare behavioural statistics of logs against a reference file.
    Validate {
        #[arg(long)]
        logs: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        #[arg(long)]
        qrels: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
    },
    /// Evaluate the configured users against a testers file.
    Test {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        testers: PathBuf,
        /// Restrict to one configured user.
        #[arg(long)]
        user: Option<String>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, seed, out } => cmd_run(&config, seed, &out),
        Command::Metrics { qrels, ranking, k } => cmd_metrics(&qrels, &ranking, k),
        Command::Validate { logs, reference, qrels, threshold } => {
            cmd_validate(&logs, &reference, qrels.as_deref(), threshold)
        }
        Command::Test { config, testers, user } => cmd_test(&config, &testers, user.as_deref()),
    }
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    Ok(parse_config(&text)?)
}

fn load_corpus(config: &ExperimentConfig, base: &Path) -> Result<LoadedCorpus> {
    let resolve = |p: &str| {
        let path = Path::new(p);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            base.join(path)
        }
    };
    let docs_text = fs::read_to_string(resolve(&config.docs_path))
        .with_context(|| format!("reading docs {}", config.docs_path))?;
    let topics_text = fs::read_to_string(resolve(&config.topics_path))
        .with_context(|| format!("reading topics {}", config.topics_path))?;
    let qrels_text = fs::read_to_string(resolve(&config.qrels_path))
        .with_context(|| format!("reading qrels {}", config.qrels_path))?;
    let index = build_index(parse_documents(&docs_text)?)?;
    let topics = parse_trec_topics(&topics_text)?;
    let qrels = parse_qrels(&qrels_text)?;
    Ok(LoadedCorpus { index, topics, qrels })
}

fn cmd_run(config_path: &Path, seed: Option<u64>, out: &Path) -> Result<()> {
    let mut config = load_config(config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let base = config_path.parent().unwrap_or(Path::new("."));
    let corpus = load_corpus(&config, base)?;
    let output = run_sweep(&config, &corpus)?;

    fs::create_dir_all(out)?;
    fs::write(out.join("results.csv"), output.to_csv())?;
    fs::write(out.join("report.txt"), output.report())?;
    let log_dir = out.join("logs");
    fs::create_dir_all(&log_dir)?;
    for (name, log) in &output.logs {
        fs::write(log_dir.join(name), log.to_text())?;
    }
    println!(
        "wrote {} metric rows and {} logs to {}",
        output.rows.len(),
        output.logs.len(),
        out.display()
    );
    Ok(())
}

fn cmd_metrics(qrels_path: &Path, ranking_path: &Path, k: usize) -> Result<()> {
    let qrels = parse_qrels(&fs::read_to_string(qrels_path)?)?;
    let run_text = fs::read_to_string(ranking_path)?;

    // TREC run format; ranked entries per topic ordered by the rank column.
    let mut per_topic: BTreeMap<String, Vec<(usize, String)>> = BTreeMap::new();
    for (i, line) in run_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() < 4 {
            bail!("run line {} needs at least 4 columns", i + 1);
        }
        let rank: usize = cols[3].parse().with_context(|| format!("bad rank on line {}", i + 1))?;
        per_topic
            .entry(cols[0].to_string())
            .or_default()
            .push((rank, cols[2].to_string()));
    }

    println!("topic,metric,value");
    for (topic, mut entries) in per_topic {
        entries.sort();
        let grades: Vec<i32> =
            entries.iter().map(|(_, doc)| qrels.grade(&topic, doc)).collect();
        let mut ideal: Vec<i32> =
            qrels.judged(&topic).map(|(_, g)| g).filter(|&g| g >= 1).collect();
        ideal.sort_unstable_by(|a, b| b.cmp(a));
        let ranking = Ranking::with_ideal(grades, ideal);
        for (name, value) in [
            (format!("p@{k}"), precision_at::<f64>(&ranking, k)),
            ("ap".into(), average_precision::<f64>(&ranking)),
            (format!("dcg@{k}"), dcg_at::<f64>(&ranking, k)),
            (format!("ndcg@{k}"), ndcg_at::<f64>(&ranking, k)),
            ("rbp:0.8".into(), rbp(&ranking, 0.8, 3)),
            ("err".into(), err::<f64>(&ranking, 3)),
        ] {
            println!("{topic},{name},{value:.6}");
        }
    }
    Ok(())
}

fn cmd_validate(
    logs_dir: &Path,
    reference_path: &Path,
    qrels_path: Option<&Path>,
    threshold: f64,
) -> Result<()> {
    let reference = ReferenceStats::parse(&fs::read_to_string(reference_path)?)?;
    let qrels = match qrels_path {
        Some(p) => parse_qrels(&fs::read_to_string(p)?)?,
        None => Default::default(),
    };
    let mut logs = Vec::new();
    let mut paths: Vec<PathBuf> = fs::read_dir(logs_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "log"))
        .collect();
    paths.sort();
    for path in paths {
        logs.push(InteractionLog::from_text(&fs::read_to_string(&path)?)?);
    }
    if logs.is_empty() {
        bail!("no .log files under {}", logs_dir.display());
    }
    let report = compare_behavior_stats(&logs, &qrels, &reference, threshold)?;
    print!("{}", report.render());
    if !report.all_within() {
        bail!("divergence above threshold for: {}", report.flagged.join(", "));
    }
    Ok(())
}

fn cmd_test(config_path: &Path, testers_path: &Path, only_user: Option<&str>) -> Result<()> {
    let config = load_config(config_path)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let corpus = load_corpus(&config, base)?;
    let testers = Tester::parse_file(&fs::read_to_string(testers_path)?)?;
    let env = TesterEnv {
        corpus: &corpus,
        systems: &config.systems,
        runs: config.runs,
        seed: config.seed,
        budget: config.budget,
    };
    println!("user,tester,pass,mean_a,mean_b,p_value");
    for user in &config.users {
        if let Some(name) = only_user {
            if user.name != name {
                continue;
            }
        }
        let (rate, outcomes) = tester_pass_rate(user, &testers, &env)?;
        for o in &outcomes {
            println!(
                "{},{},{},{:.6},{:.6},{:.6}",
                user.name, o.tester, o.pass, o.mean_a, o.mean_b, o.p_value
            );
        }
        println!("{},__pass_rate__,{rate:.4},,,", user.name);
    }
    Ok(())
}
