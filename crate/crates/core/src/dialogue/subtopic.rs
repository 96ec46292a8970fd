use rand::Rng;

use super::DialogueError;
use crate::{Query, Scalar};

/// Row-stochastic matrix over subtopic targets.
pub type TransitionMatrix = Vec<Vec<Scalar>>;

/// State of the subtopic Markov chain: start, one of `n` subtopics, or the
/// absorbing end state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubtopicState {
    Start,
    /// 1-based subtopic index.
    Subtopic(usize),
    End,
}

/// Subtopic-to-subtopic transition model of a conversational search user.
///
/// Rows are indexed by source state 0..=n (0 = start) and give a
/// distribution over targets 1..=n+1 (n+1 = end); each row must sum to 1.
/// The optional relevance-conditioned pair replaces the base rows once the
/// last answer's relevance is known.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    n: usize,
    rows: TransitionMatrix,
    rel_rows: Option<(TransitionMatrix, TransitionMatrix)>,
    queries: Vec<Vec<Query>>,
}

impl TransitionTable {
    pub fn new(
        rows: TransitionMatrix,
        queries: Vec<Vec<Query>>,
    ) -> Result<Self, DialogueError> {
        let n = rows.len().checked_sub(1).ok_or_else(|| {
            DialogueError::InvalidTable("need at least the start row".into())
        })?;
        validate_rows(&rows, n)?;
        if queries.len() != n {
            return Err(DialogueError::InvalidTable(format!(
                "expected {n} query sets, got {}",
                queries.len()
            )));
        }
        Ok(Self { n, rows, rel_rows: None, queries })
    }

    /// Attach relevance-conditioned matrices: used instead of the base rows
    /// whenever relevance feedback is available.
    pub fn with_relevance_rows(
        mut self,
        rel: TransitionMatrix,
        nonrel: TransitionMatrix,
    ) -> Result<Self, DialogueError> {
        validate_rows(&rel, self.n)?;
        validate_rows(&nonrel, self.n)?;
        self.rel_rows = Some((rel, nonrel));
        Ok(self)
    }

    pub fn subtopics(&self) -> usize {
        self.n
    }

    pub fn relevance_conditioned(&self) -> bool {
        self.rel_rows.is_some()
    }

    /// Queries associated with a subtopic (1-based).
    pub fn queries_for(&self, subtopic: usize) -> &[Query] {
        &self.queries[subtopic - 1]
    }

    fn row(&self, state: SubtopicState, relevance: Option<bool>) -> Result<&[Scalar], DialogueError> {
        let idx = match state {
            SubtopicState::Start => 0,
            SubtopicState::Subtopic(s) if s >= 1 && s <= self.n => s,
            SubtopicState::Subtopic(s) => {
                return Err(DialogueError::InvalidTable(format!("subtopic {s} out of range")))
            }
            SubtopicState::End => {
                return Err(DialogueError::InvalidTable("end state has no row".into()))
            }
        };
        match (&self.rel_rows, relevance) {
            (Some((rel, _)), Some(true)) => Ok(&rel[idx]),
            (Some((_, nonrel)), Some(false)) => Ok(&nonrel[idx]),
            (Some(_), None) => Err(DialogueError::InvalidTable(
                "relevance-conditioned table needs a relevance signal".into(),
            )),
            (None, _) => Ok(&self.rows[idx]),
        }
    }
}

fn validate_rows(rows: &[Vec<Scalar>], n: usize) -> Result<(), DialogueError> {
    if rows.len() != n + 1 {
        return Err(DialogueError::InvalidTable(format!(
            "expected {} rows, got {}",
            n + 1,
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n + 1 {
            return Err(DialogueError::InvalidTable(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                n + 1
            )));
        }
        let total: Scalar = row.iter().sum();
        if (total - 1.0).abs() > 1e-9 || row.iter().any(|&p| p < 0.0) {
            return Err(DialogueError::InvalidTable(format!(
                "row {i} sums to {total}, must be 1"
            )));
        }
    }
    Ok(())
}

/// One step of the subtopic chain. The end state is absorbing.
pub fn subtopic_step<R: Rng + ?Sized>(
    table: &TransitionTable,
    state: SubtopicState,
    relevance: Option<bool>,
    rng: &mut R,
) -> Result<SubtopicState, DialogueError> {
    if state == SubtopicState::End {
        return Ok(SubtopicState::End);
    }
    let row = table.row(state, relevance)?;
    let u: Scalar = rng.random();
    let mut acc = 0.0;
    for (j, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            let target = j + 1;
            return Ok(if target == table.subtopics() + 1 {
                SubtopicState::End
            } else {
                SubtopicState::Subtopic(target)
            });
        }
    }
    Ok(SubtopicState::End)
}

/// Persistence model: the probability of leaving after a turn, conditioned
/// on whether the answer was relevant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceParams {
    pub leave_given_rel: Scalar,
    pub leave_given_nonrel: Scalar,
}

/// Whether the user queries again at `turn`.
///
/// The first turn always queries; afterwards the user leaves with the
/// branch's leave probability.
pub fn continue_querying<R: Rng + ?Sized>(
    params: &PersistenceParams,
    turn: usize,
    relevance: bool,
    rng: &mut R,
) -> bool {
    if turn <= 1 {
        return true;
    }
    let leave = if relevance { params.leave_given_rel } else { params.leave_given_nonrel };
    rng.random::<Scalar>() >= leave
}
