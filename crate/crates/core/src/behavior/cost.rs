use crate::Scalar;

/// Time cost of each user action, in seconds.
///
/// Reading a document of `l` words takes `read_rate * l + judge_constant`
/// seconds; the other actions cost their fixed constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub t_query: Scalar,
    pub t_serp_entry: Scalar,
    pub t_snippet: Scalar,
    /// Seconds per word while reading (`a` in `a*l + b`).
    pub read_rate: Scalar,
    /// Fixed assessment time per document (`b` in `a*l + b`).
    pub judge_constant: Scalar,
}

impl Default for CostModel {
    fn default() -> Self {
        // Reading coefficients follow the time-biased-gain calibration;
        // the per-action constants are this crate's defaults.
        Self {
            t_query: 7.0,
            t_serp_entry: 2.0,
            t_snippet: 2.0,
            read_rate: 0.018,
            judge_constant: 7.8,
        }
    }
}

/// A costed user action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    IssueQuery,
    SerpEntry,
    ExamineSnippet,
    /// Read and assess a document of the given length in words.
    ReadDocument { words: usize },
}

/// Seconds spent on an action.
pub fn action_cost(cost: &CostModel, action: Action) -> Scalar {
    match action {
        Action::IssueQuery => cost.t_query,
        Action::SerpEntry => cost.t_serp_entry,
        Action::ExamineSnippet => cost.t_snippet,
        Action::ReadDocument { words } => cost.read_rate * words as Scalar + cost.judge_constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_read_is_linear_in_length() {
        let cost = CostModel { read_rate: 0.018, judge_constant: 7.8, ..Default::default() };
        assert_eq!(action_cost(&cost, Action::ReadDocument { words: 100 }), 9.6);
        assert_eq!(action_cost(&cost, Action::ReadDocument { words: 0 }), 7.8);
    }

    #[test]
    fn fixed_actions_return_their_constants() {
        let cost = CostModel { t_query: 6.5, ..Default::default() };
        assert_eq!(action_cost(&cost, Action::IssueQuery), 6.5);
        assert_eq!(action_cost(&cost, Action::SerpEntry), cost.t_serp_entry);
        assert_eq!(action_cost(&cost, Action::ExamineSnippet), cost.t_snippet);
    }
}
