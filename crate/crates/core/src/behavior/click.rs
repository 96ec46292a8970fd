use super::knowledge::KnowledgeState;
use super::BehaviorError;
use crate::engine::Snippet;
use crate::{Grade, Scalar};

/// Click probability per relevance grade, indexed 0..=3.
#[derive(Debug, Clone, PartialEq)]
pub struct GradeProbTable {
    probs: [Scalar; 4],
}

impl GradeProbTable {
    pub fn new(probs: [Scalar; 4]) -> Self {
        Self { probs }
    }

    /// Graded click calibration from TREC-based simulation studies:
    /// 0.27 for grades <= 1, 0.34 for grade 2, 0.61 for grade 3.
    pub fn baskaya2013_click() -> Self {
        Self::new([0.27, 0.27, 0.34, 0.61])
    }

    /// Binary click calibration from a user study: 0.21 non-relevant,
    /// 0.36 relevant.
    pub fn maxwell2015_click() -> Self {
        Self::new([0.21, 0.36, 0.36, 0.36])
    }

    /// Graded judging calibration: 0.20 / 0.88 / 0.95 / 0.97.
    pub fn baskaya2013_judge() -> Self {
        Self::new([0.20, 0.88, 0.95, 0.97])
    }

    /// Binary judging calibration: 0.53 non-relevant, 0.71 relevant.
    pub fn maxwell2015_judge() -> Self {
        Self::new([0.53, 0.71, 0.71, 0.71])
    }

    pub fn prob(&self, grade: Grade) -> Scalar {
        let idx = grade.clamp(0, 3) as usize;
        self.probs[idx]
    }
}

/// Position-indexed click curves.
#[derive(Debug, Clone, PartialEq)]
pub enum PositionCurve {
    /// The naive clicking policy `1/log2(rank+1)`.
    LogInverse,
    /// Explicit per-rank probabilities; ranks beyond the table never click.
    Table(Vec<Scalar>),
}

/// Decides whether an examined snippet attracts a click.
#[derive(Debug, Clone, PartialEq)]
pub enum ClickModel {
    /// Click exactly the snippets whose grade is >= 1.
    PerfectSnippet,
    /// Click probability depends on rank only.
    Position(PositionCurve),
    /// Click probability calibrated on the snippet grade.
    GradeCalibrated(GradeProbTable),
    /// Click iff the snippet text scores at least `threshold` against the
    /// user's relevance model.
    Attractiveness { threshold: Scalar },
}

/// Probability of clicking an examined snippet.
pub fn click_prob(
    model: &ClickModel,
    snippet: &Snippet,
    knowledge: &KnowledgeState,
) -> Result<Scalar, BehaviorError> {
    match model {
        ClickModel::PerfectSnippet => {
            let grade = snippet.grade.ok_or(BehaviorError::MissingSnippetGrade)?;
            Ok(if grade >= 1 { 1.0 } else { 0.0 })
        }
        ClickModel::GradeCalibrated(table) => {
            let grade = snippet.grade.ok_or(BehaviorError::MissingSnippetGrade)?;
            Ok(table.prob(grade))
        }
        ClickModel::Position(curve) => Ok(match curve {
            PositionCurve::LogInverse => 1.0 / ((snippet.rank as Scalar) + 1.0).log2(),
            PositionCurve::Table(t) => t.get(snippet.rank - 1).copied().unwrap_or(0.0),
        }),
        ClickModel::Attractiveness { threshold } => {
            let tokens: Vec<String> = snippet.tokens().cloned().collect();
            let score = knowledge.score_text(&tokens)?;
            Ok(if score >= *threshold { 1.0 } else { 0.0 })
        }
    }
}
