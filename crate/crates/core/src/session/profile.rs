use crate::behavior::{
    ClickModel, CostModel, JudgeModel, RelevanceModelWeights, ScanModel, ScentModel, StopPolicy,
};
use crate::engine::SnippetMode;
use crate::querysim::{AdhocSpec, KnownItemSpec, PreParams, ReformulationStrategy};
use crate::Grade;

/// How the simulated user formulates queries over the session.
#[derive(Debug, Clone, PartialEq)]
pub enum QuerySpec {
    /// One target document; every query re-samples terms from it.
    KnownItem(KnownItemSpec),
    /// Sample each query from the topic/collection mixture.
    Adhoc(AdhocSpec),
    /// Walk one of the five term-level reformulation strategies over a pool
    /// of the `pool_size` strongest topic terms.
    Strategy { strategy: ReformulationStrategy, pool_size: usize },
    /// At each step, choose among the strategies' next queries by the
    /// precision-recall-effort objective.
    Pre { params: PreParams, pool_size: usize },
}

/// Knowledge-state initialization: relevance-mixture weights and how many
/// co-occurrence terms seed the background model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnowledgeConfig {
    pub weights: RelevanceModelWeights,
    pub background_terms: usize,
}

impl Default for KnowledgeConfig {
    fn default() -> Self {
        Self { weights: RelevanceModelWeights::default(), background_terms: 10 }
    }
}

/// Where ground-truth grades come from during a session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradeSource {
    /// The test collection's qrels.
    Qrels,
    /// Known-item search: the target is grade 3, everything else 0.
    KnownItemTarget(String),
}

impl GradeSource {
    pub fn grade(&self, qrels: &crate::corpus::QrelsTable, topic: &str, doc: &str) -> Grade {
        match self {
            GradeSource::Qrels => qrels.grade(topic, doc),
            GradeSource::KnownItemTarget(target) => {
                if doc == target {
                    3
                } else {
                    0
                }
            }
        }
    }
}

/// The full parameter bundle of one simulated user.
#[derive(Debug, Clone, PartialEq)]
pub struct UserProfile {
    pub name: String,
    pub query: QuerySpec,
    pub scan: ScanModel,
    pub click: ClickModel,
    pub judge: JudgeModel,
    pub stop: StopPolicy,
    pub cost: CostModel,
    pub scent: ScentModel,
    pub snippet_mode: SnippetMode,
    pub knowledge: KnowledgeConfig,
}

impl UserProfile {
    /// A plain baseline user: S4 reformulation, fixed-depth scanning,
    /// perfect snippets, threshold judging, satisfied after two relevant
    /// documents or five queries.
    pub fn baseline(name: impl Into<String>) -> Self {
        use crate::behavior::{QueryStop, SessionStop};
        Self {
            name: name.into(),
            query: QuerySpec::Strategy {
                strategy: ReformulationStrategy::S4,
                pool_size: 10,
            },
            scan: ScanModel::FixedDepth { k: 10 },
            click: ClickModel::PerfectSnippet,
            judge: JudgeModel::Threshold { mu: 1 },
            stop: StopPolicy {
                query: QueryStop::Satisfaction { n: 2 },
                session: SessionStop::MaxQueries { n: 5 },
            },
            cost: CostModel::default(),
            scent: ScentModel::always(),
            snippet_mode: SnippetMode::Perfect,
            knowledge: KnowledgeConfig::default(),
        }
    }
}
