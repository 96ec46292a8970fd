use rand::Rng;

use super::log::{EventKind, InteractionLog};
use super::profile::{GradeSource, QuerySpec, UserProfile};
use super::SessionError;
use crate::behavior::{
    action_cost, click_prob, examine_next, expand_background, judge_prob, serp_entry_decision,
    session_continue, stop_decision, Action, BrowseState, JudgeInput, JudgeModel, KnowledgeState,
    QueryState, SessionCounters, SessionVerdict, StopReason, StopVerdict,
};
use crate::corpus::{Document, LanguageModel, QrelsTable, Topic};
use crate::engine::{search, Index, ScorerSpec, Serp, SnippetMode};
use crate::querysim::{
    adhoc_pmf, pre_select_query, query_for_doc, reformulate, sample_target, AdhocSpec,
    KnownItemSpec, MatchKnowledge, PreParams, QuerysimError, ReformulationStrategy, TermPool,
    TopicSource,
};
use crate::{Grade, Lm, Query, Scalar};

/// The system a session runs against.
#[derive(Debug, Clone)]
pub struct SystemUnderTest<'a> {
    pub index: &'a Index,
    pub scorer: ScorerSpec,
    pub k: usize,
}

/// Mutable session state: evolving knowledge plus monotone counters.
#[derive(Debug, Clone)]
pub struct SessionState {
    pub knowledge: KnowledgeState,
    pub queries_issued: usize,
    pub nonrel_snippets: usize,
    /// Accumulated ground-truth gain over docs judged relevant.
    pub gain: Scalar,
}

impl SessionState {
    pub fn new(knowledge: KnowledgeState) -> Self {
        Self { knowledge, queries_issued: 0, nonrel_snippets: 0, gain: 0.0 }
    }

    /// Fold a document the user judged relevant into the knowledge state.
    /// A document's gain counts once; re-finding it adds nothing.
    pub fn update_knowledge(&mut self, doc: &Document, true_grade: Grade) {
        if self.knowledge.add_relevant_doc(doc) {
            self.gain += true_grade.max(0) as Scalar;
        }
    }
}

/// Run one session of the complex searcher workflow and log every step:
/// topic examination, querying, SERP entry, snippet examination, clicking,
/// document judging, and the stop decisions in between.
///
/// Deterministic for a fixed RNG stream; `budget <= 0` produces the minimal
/// two-event log.
pub fn run_session<R: Rng + ?Sized>(
    profile: &UserProfile,
    topic: &Topic,
    system: &SystemUnderTest,
    qrels: &QrelsTable,
    budget: Scalar,
    rng: &mut R,
) -> Result<InteractionLog, SessionError> {
    let mut log = InteractionLog::new();
    if budget <= 0.0 {
        log.push(0.0, EventKind::SessionStart { topic: topic.id.clone() });
        log.push(0.0, EventKind::SessionEnd { reason: "budget".into() });
        return Ok(log);
    }

    let index = system.index;
    let collection_lm = collection_model(index, topic)?;
    let topic_tokens: Vec<String> = topic.need_tokens().cloned().collect();
    let topic_lm: Lm = match LanguageModel::from_counts(count_pairs(&topic_tokens)) {
        Ok(lm) => lm,
        Err(_) => LanguageModel::uniform(["topic"])?,
    };
    let background = expand_background(
        &topic.title,
        index.docs(),
        index.stats(),
        profile.knowledge.background_terms,
    )
    .unwrap_or_else(|_| topic_lm.clone());
    let knowledge = KnowledgeState::new(
        topic_lm.clone(),
        background,
        collection_lm.clone(),
        profile.knowledge.weights,
    );
    let mut state = SessionState::new(knowledge);

    // Topic examination: a fixed-cost read of the information need.
    let mut time = action_cost(
        &profile.cost,
        Action::ReadDocument { words: topic_tokens.len() },
    );
    log.push(time, EventKind::SessionStart { topic: topic.id.clone() });

    let mut gen = QueryGen::init(profile, topic, index, qrels, &collection_lm, &topic_lm, rng)?;
    let grade_source = gen.grade_source();

    loop {
        if time >= budget {
            log.push(time, EventKind::SessionEnd { reason: "budget".into() });
            break;
        }
        let query = match gen.next_query(&state.knowledge, rng) {
            Ok(q) => q,
            Err(QuerysimError::StrategyExhausted) => {
                log.push(time, EventKind::SessionEnd { reason: "out-of-queries".into() });
                break;
            }
            Err(e) => return Err(e.into()),
        };
        state.queries_issued += 1;
        time += action_cost(&profile.cost, Action::IssueQuery);
        log.push(time, EventKind::QueryIssued { query: query.clone() });

        let serp = graded_serp(profile, &query, system, qrels, topic, &grade_source, &state);
        time += action_cost(&profile.cost, Action::SerpEntry);
        log.push(time, EventKind::SerpShown { results: serp.snippets.len() });

        if serp.snippets.is_empty() {
            log.push(time, EventKind::StopQuery { reason: StopReason::EndOfResults.as_str().into() });
        } else if !serp_entry_decision(&profile.scent, &serp, rng) {
            // SERP abandoned on first impression: cost only, straight to the
            // continue-or-abandon decision.
            log.push(time, EventKind::SerpSkipped);
        } else {
            let mut qstate = QueryState::new();
            let mut browse = BrowseState::new();
            let mut stop_reason: Option<StopReason> = None;
            let total = serp.snippets.len();
            for (i, snippet) in serp.snippets.iter().enumerate() {
                let rank = i + 1;
                if !examine_next(&profile.scan, rank, &mut browse, rng)? {
                    stop_reason = Some(StopReason::ScanEnded);
                    break;
                }
                let snippet_cost = action_cost(&profile.cost, Action::ExamineSnippet);
                time += snippet_cost;
                qstate.add_time(snippet_cost);
                let grade = snippet.grade.unwrap_or(0);
                log.push(time, EventKind::SnippetExamined { rank, grade });
                qstate.record_examined(rank, grade);
                if grade < 1 {
                    state.nonrel_snippets += 1;
                }

                let p_click = click_prob(&profile.click, snippet, &state.knowledge)?;
                if rng.random::<Scalar>() < p_click {
                    browse.record_click();
                    qstate.record_click();
                    log.push(time, EventKind::Click { doc: snippet.doc_id.clone() });
                    let doc = index
                        .doc(&snippet.doc_id)
                        .expect("SERP snippets reference indexed documents");
                    let true_grade = grade_source.grade(qrels, &topic.id, &doc.id);
                    let input = judge_input(&profile.judge, &state, doc, true_grade)?;
                    let p_rel = judge_prob(&profile.judge, input)?;
                    let rel = rng.random::<Scalar>() < p_rel;
                    let read_cost =
                        action_cost(&profile.cost, Action::ReadDocument { words: doc.len() });
                    time += read_cost;
                    qstate.add_time(read_cost);
                    log.push(
                        time,
                        EventKind::DocJudged { doc: doc.id.clone(), rel, grade: true_grade },
                    );
                    if rel {
                        // Knowledge first, stop checks after.
                        state.update_knowledge(doc, true_grade);
                    }
                }

                let tokens: Vec<String> = snippet.tokens().cloned().collect();
                let verdict = stop_decision(&profile.stop.query, &qstate, &tokens);
                qstate.seen_snippets.push(tokens.clone());
                state.knowledge.observe_snippet(tokens);

                if time >= budget {
                    log.push(time, EventKind::SessionEnd { reason: "budget".into() });
                    debug_assert!(log.validate().is_ok());
                    return Ok(log);
                }
                if let StopVerdict::StopQuery(reason) = verdict {
                    stop_reason = Some(reason);
                    break;
                }
                if rank == total {
                    stop_reason = Some(StopReason::EndOfResults);
                }
            }
            if let Some(reason) = stop_reason {
                log.push(time, EventKind::StopQuery { reason: reason.as_str().into() });
            }
        }

        let counters = SessionCounters {
            queries_issued: state.queries_issued,
            rel_docs_found: state.knowledge.rel_docs_found(),
            nonrel_snippets: state.nonrel_snippets,
            elapsed: time,
            out_of_queries: gen.is_exhausted(),
        };
        if let SessionVerdict::Abandon(reason) = session_continue(&profile.stop.session, &counters)
        {
            log.push(time, EventKind::SessionEnd { reason: reason.as_str().into() });
            break;
        }
    }
    debug_assert!(log.validate().is_ok());
    Ok(log)
}

fn count_pairs(tokens: &[String]) -> impl Iterator<Item = (&str, usize)> {
    let mut counts: std::collections::BTreeMap<&str, usize> = std::collections::BTreeMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_insert(0) += 1;
    }
    counts.into_iter()
}

// Collection model over every indexed token; falls back to the topic
// vocabulary when the collection is empty so scoring stays defined.
fn collection_model(index: &Index, topic: &Topic) -> Result<Lm, SessionError> {
    let counts: Vec<(String, usize)> = index
        .stats()
        .vocabulary()
        .map(|t| (t.to_string(), index.stats().cf(t) as usize))
        .collect();
    match LanguageModel::from_counts(counts.iter().map(|(t, n)| (t.as_str(), *n))) {
        Ok(lm) => Ok(lm),
        Err(_) => {
            let tokens: Vec<&str> = topic.need_tokens().map(String::as_str).collect();
            if tokens.is_empty() {
                Ok(LanguageModel::uniform(["topic"])?)
            } else {
                Ok(LanguageModel::uniform(tokens)?)
            }
        }
    }
}

fn graded_serp(
    profile: &UserProfile,
    query: &Query,
    system: &SystemUnderTest,
    qrels: &QrelsTable,
    topic: &Topic,
    grade_source: &GradeSource,
    state: &SessionState,
) -> Serp {
    let serp = search(system.index, query, &system.scorer, system.k);
    match profile.snippet_mode {
        SnippetMode::Perfect => {
            serp.with_grades(|doc| grade_source.grade(qrels, &topic.id, doc))
        }
        SnippetMode::Textual => {
            // Judge snippets from their text with the relevance model; the
            // perceived grade is binary.
            let mu = match profile.judge {
                JudgeModel::RelevanceLm { mu } => mu,
                _ => 0.0,
            };
            let mut serp = serp;
            for s in &mut serp.snippets {
                let tokens: Vec<String> = s.tokens().cloned().collect();
                let judged = state
                    .knowledge
                    .score_text(&tokens)
                    .map(|score| score >= mu)
                    .unwrap_or(false);
                s.grade = Some(judged as Grade);
            }
            serp
        }
    }
}

fn judge_input(
    judge: &JudgeModel,
    state: &SessionState,
    doc: &Document,
    true_grade: Grade,
) -> Result<JudgeInput, SessionError> {
    match judge {
        JudgeModel::RelevanceLm { .. } => {
            let tokens: Vec<String> = doc.tokens().cloned().collect();
            Ok(JudgeInput::Score(state.knowledge.score_text(&tokens)?))
        }
        _ => Ok(JudgeInput::Grade(true_grade)),
    }
}

/// Stateful per-session query generator.
enum QueryGen<'a> {
    KnownItem { spec: &'a KnownItemSpec, target: &'a Document, collection_lm: Lm },
    Adhoc { spec: AdhocSpec, topic: &'a Topic, rel_docs: Vec<&'a Document>, collection_lm: Lm },
    Strategy { strategy: ReformulationStrategy, pool: TermPool, step: usize },
    Pre {
        params: &'a PreParams,
        pool: TermPool,
        step: usize,
        rel_docs: Vec<&'a Document>,
        nonrel_docs: Vec<&'a Document>,
    },
}

impl<'a> QueryGen<'a> {
    fn init<R: Rng + ?Sized>(
        profile: &'a UserProfile,
        topic: &'a Topic,
        index: &'a Index,
        qrels: &QrelsTable,
        collection_lm: &Lm,
        topic_lm: &Lm,
        rng: &mut R,
    ) -> Result<Self, SessionError> {
        let rel_docs = || -> Vec<&Document> {
            qrels
                .relevant_docs(&topic.id, 1)
                .into_iter()
                .filter_map(|id| index.doc(id))
                .collect()
        };
        match &profile.query {
            QuerySpec::KnownItem(spec) => {
                let target_idx = sample_target(index.docs(), spec.doc_prior, rng)?;
                Ok(QueryGen::KnownItem {
                    spec,
                    target: &index.docs()[target_idx],
                    collection_lm: collection_lm.clone(),
                })
            }
            QuerySpec::Adhoc(spec) => {
                let rel = rel_docs();
                let mut spec = spec.clone();
                // Relevant-document topic models need documents to exist.
                if rel.is_empty()
                    && matches!(
                        spec.source,
                        TopicSource::FrequentTerms | TopicSource::DiscriminativeTerms
                    )
                {
                    spec.source = TopicSource::SeedQuery;
                }
                Ok(QueryGen::Adhoc {
                    spec,
                    topic,
                    rel_docs: rel,
                    collection_lm: collection_lm.clone(),
                })
            }
            QuerySpec::Strategy { strategy, pool_size } => Ok(QueryGen::Strategy {
                strategy: *strategy,
                pool: TermPool::from_lm(topic_lm, (*pool_size).max(1))?,
                step: 0,
            }),
            QuerySpec::Pre { params, pool_size } => {
                let rel = rel_docs();
                let rel_ids: std::collections::BTreeSet<&str> =
                    rel.iter().map(|d| d.id.as_str()).collect();
                let mut nonrel: Vec<&Document> = index
                    .docs()
                    .iter()
                    .filter(|d| !rel_ids.contains(d.id.as_str()))
                    .collect();
                // Uniform sample without replacement, deterministic in rng.
                let mut sampled = Vec::new();
                let want = params.n_neg.max(1).min(nonrel.len());
                for _ in 0..want {
                    let i = rng.random_range(0..nonrel.len());
                    sampled.push(nonrel.swap_remove(i));
                }
                Ok(QueryGen::Pre {
                    params,
                    pool: TermPool::from_lm(topic_lm, (*pool_size).max(1))?,
                    step: 0,
                    rel_docs: rel,
                    nonrel_docs: sampled,
                })
            }
        }
    }

    fn grade_source(&self) -> GradeSource {
        match self {
            QueryGen::KnownItem { target, .. } => {
                GradeSource::KnownItemTarget(target.id.clone())
            }
            _ => GradeSource::Qrels,
        }
    }

    fn next_query<R: Rng + ?Sized>(
        &mut self,
        knowledge: &KnowledgeState,
        rng: &mut R,
    ) -> Result<Query, QuerysimError> {
        match self {
            QueryGen::KnownItem { spec, target, collection_lm } => {
                query_for_doc(target, spec, Some(collection_lm), rng)
            }
            QueryGen::Adhoc { spec, topic, rel_docs, collection_lm } => gen_adhoc_seen(
                topic,
                rel_docs,
                collection_lm,
                spec,
                knowledge.seen_snippets(),
                rng,
            ),
            QueryGen::Strategy { strategy, pool, step } => {
                *step += 1;
                reformulate(*strategy, pool, *step)
            }
            QueryGen::Pre { params, pool, step, rel_docs, nonrel_docs } => {
                *step += 1;
                let mut candidates: Vec<Query> = Vec::new();
                for strategy in ReformulationStrategy::ALL {
                    if let Ok(q) = reformulate(strategy, pool, *step) {
                        if !candidates.contains(&q) {
                            candidates.push(q);
                        }
                    }
                }
                if candidates.is_empty() {
                    return Err(QuerysimError::StrategyExhausted);
                }
                let (best, _scores) = pre_select_query(
                    &candidates,
                    rel_docs,
                    nonrel_docs,
                    params,
                    &MatchKnowledge::Full,
                )?;
                Ok(best)
            }
        }
    }

    fn is_exhausted(&self) -> bool {
        match self {
            QueryGen::KnownItem { .. } | QueryGen::Adhoc { .. } => false,
            QueryGen::Strategy { strategy, pool, step } => {
                reformulate(*strategy, pool, step + 1).is_err()
            }
            QueryGen::Pre { pool, step, .. } => ReformulationStrategy::ALL
                .iter()
                .all(|s| reformulate(*s, pool, step + 1).is_err()),
        }
    }
}

fn gen_adhoc_seen<R: Rng + ?Sized>(
    topic: &Topic,
    rel_docs: &[&Document],
    collection_lm: &Lm,
    spec: &AdhocSpec,
    seen: &[Vec<String>],
    rng: &mut R,
) -> Result<Query, QuerysimError> {
    let pmf = adhoc_pmf(topic, rel_docs, collection_lm, spec, seen)?;
    let sampler = pmf.sampler();
    Ok((0..spec.length.max(1)).map(|_| sampler.sample(rng).to_string()).collect())
}
