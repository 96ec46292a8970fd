use super::gain;
use crate::num::Float;
use crate::Grade;

/// A ranked list of relevance grades, with an optional ideal reference for
/// normalization. Without an explicit ideal, the list's own grades sorted
/// descending serve as the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    grades: Vec<Grade>,
    ideal: Option<Vec<Grade>>,
}

impl Ranking {
    pub fn new(grades: Vec<Grade>) -> Self {
        Self { grades, ideal: None }
    }

    /// Attach the ideal grade vector used by NDCG (e.g. all judged grades of
    /// the topic, sorted descending).
    pub fn with_ideal(grades: Vec<Grade>, ideal: Vec<Grade>) -> Self {
        Self { grades, ideal: Some(ideal) }
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub(crate) fn ideal_grades(&self) -> Vec<Grade> {
        match &self.ideal {
            Some(ideal) => ideal.clone(),
            None => {
                let mut sorted = self.grades.clone();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                sorted
            }
        }
    }
}

impl From<Vec<Grade>> for Ranking {
    fn from(grades: Vec<Grade>) -> Self {
        Self::new(grades)
    }
}

/// Classic set- and rank-based measures. Binary measures binarize at
/// grade >= 1; DCG uses the `1/log2(i+1)` discount with linear gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classic {
    PrecisionAt(usize),
    AveragePrecision,
    DcgAt(usize),
    NdcgAt(usize),
}

pub fn classic<F: Float>(metric: Classic, ranking: &Ranking) -> F {
    match metric {
        Classic::PrecisionAt(k) => precision_at(ranking, k),
        Classic::AveragePrecision => average_precision(ranking),
        Classic::DcgAt(k) => dcg_at(ranking, k),
        Classic::NdcgAt(k) => ndcg_at(ranking, k),
    }
}

/// Fraction of the top `k` positions holding a relevant (grade >= 1) item.
/// Positions beyond the list count as non-relevant.
pub fn precision_at<F: Float>(ranking: &Ranking, k: usize) -> F {
    if k == 0 {
        return F::ZERO;
    }
    let rel = ranking.grades().iter().take(k).filter(|&&g| g >= 1).count();
    F::from_count(rel) / F::from_count(k)
}

/// Mean of precision at each relevant position, over the relevant items in
/// the list; 0 when the list holds none.
pub fn average_precision<F: Float>(ranking: &Ranking) -> F {
    let mut rel_seen = 0usize;
    let mut sum = F::ZERO;
    for (i, &g) in ranking.grades().iter().enumerate() {
        if g >= 1 {
            rel_seen += 1;
            sum += F::from_count(rel_seen) / F::from_count(i + 1);
        }
    }
    if rel_seen == 0 {
        F::ZERO
    } else {
        sum / F::from_count(rel_seen)
    }
}

/// Discounted cumulative gain at `k` with linear gains.
pub fn dcg_at<F: Float>(ranking: &Ranking, k: usize) -> F {
    dcg_of(ranking.grades(), k)
}

fn dcg_of<F: Float>(grades: &[Grade], k: usize) -> F {
    grades
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, &g)| F::cast(g as f64) / F::cast(((i + 2) as f64).log2()))
        .sum()
}

/// DCG normalized by the ideal ranking's DCG; 0 when the ideal has no gain.
pub fn ndcg_at<F: Float>(ranking: &Ranking, k: usize) -> F {
    let ideal = dcg_of::<F>(&ranking.ideal_grades(), k);
    if ideal > F::ZERO {
        dcg_at::<F>(ranking, k) / ideal
    } else {
        F::ZERO
    }
}

/// Rank-biased precision: `(1-p) * sum_i r_i * p^(i-1)` with gains
/// normalized to [0, 1] by `g/g_max`.
pub fn rbp<F: Float>(ranking: &Ranking, p: F, g_max: Grade) -> F {
    let mut weight = F::ONE - p;
    let mut sum = F::ZERO;
    for &g in ranking.grades() {
        sum += gain::<F>(g, g_max) * weight;
        weight = weight * p;
    }
    sum
}

/// Expected reciprocal rank under the cascade user model, with the standard
/// grade mapping `R = (2^g - 1) / 2^g_max`.
pub fn err<F: Float>(ranking: &Ranking, g_max: Grade) -> F {
    let denom = F::cast((2f64).powi(g_max));
    let mut not_satisfied = F::ONE;
    let mut sum = F::ZERO;
    for (i, &g) in ranking.grades().iter().enumerate() {
        let r = (F::cast((2f64).powi(g)) - F::ONE) / denom;
        sum += not_satisfied * r / F::from_count(i + 1);
        not_satisfied = not_satisfied * (F::ONE - r);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn precision_counts_relevant_share() {
        let r = Ranking::new(vec![1, 0, 1]);
        assert_abs_diff_eq!(precision_at::<f64>(&r, 3), 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn precision_beyond_list_counts_misses() {
        let r = Ranking::new(vec![1]);
        assert_abs_diff_eq!(precision_at::<f64>(&r, 4), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn dcg_hand_value() {
        let r = Ranking::new(vec![3, 2]);
        let expected = 3.0 + 2.0 / 3f64.log2();
        assert_abs_diff_eq!(dcg_at::<f64>(&r, 2), expected, epsilon = 1e-9);
        assert!((dcg_at::<f64>(&r, 2) - 4.2619).abs() < 1e-4);
    }

    #[test]
    fn ndcg_of_ideal_is_one() {
        let r = Ranking::new(vec![3, 2, 1, 0]);
        assert_abs_diff_eq!(ndcg_at::<f64>(&r, 4), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rbp_point_mass_at_rank_one() {
        let r = Ranking::new(vec![3, 3, 3]);
        assert_abs_diff_eq!(rbp::<f64>(&r, 0.0, 3), 1.0, epsilon = 1e-12);
        let r0 = Ranking::new(vec![0, 3, 3]);
        assert_abs_diff_eq!(rbp::<f64>(&r0, 0.0, 3), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rbp_hand_value() {
        // Normalized gains [1, 1, 0, ...] at p = 0.8: 0.2 * (1 + 0.8).
        let r = Ranking::new(vec![3, 3, 0, 0]);
        assert_abs_diff_eq!(rbp::<f64>(&r, 0.8, 3), 0.36, epsilon = 1e-12);
    }

    #[test]
    fn err_single_top_grade() {
        let r = Ranking::new(vec![3]);
        assert_abs_diff_eq!(err::<f64>(&r, 3), 0.875, epsilon = 1e-12);
    }

    #[test]
    fn err_prefers_relevant_earlier() {
        let early = Ranking::new(vec![2, 0, 0]);
        let late = Ranking::new(vec![0, 2, 0]);
        assert!(err::<f64>(&early, 3) > err::<f64>(&late, 3));
    }

    #[test]
    fn all_zero_rankings_score_zero() {
        let r = Ranking::new(vec![0, 0, 0]);
        assert_eq!(precision_at::<f64>(&r, 3), 0.0);
        assert_eq!(average_precision::<f64>(&r), 0.0);
        assert_eq!(dcg_at::<f64>(&r, 3), 0.0);
        assert_eq!(ndcg_at::<f64>(&r, 3), 0.0);
        assert_eq!(rbp::<f64>(&r, 0.8, 3), 0.0);
        assert_eq!(err::<f64>(&r, 3), 0.0);
    }

    #[test]
    fn ap_hand_value() {
        // Relevant at ranks 1 and 3: (1/1 + 2/3) / 2.
        let r = Ranking::new(vec![2, 0, 1]);
        assert_abs_diff_eq!(average_precision::<f64>(&r), (1.0 + 2.0 / 3.0) / 2.0, epsilon = 1e-12);
    }
}
