use rand::Rng;

use crate::engine::Serp;
use crate::Scalar;

/// SERP-level entry decision: does the page smell good enough to examine?
///
/// The scent of a SERP is the fraction of its snippets graded relevant
/// (grade >= 1). Entry happens with probability
/// `clamp(base + slope * scent, 0, 1)`. The named presets grade how well the
/// user tells promising pages from poor ones; the numbers are this crate's
/// calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScentModel {
    Always,
    Stochastic { base: Scalar, slope: Scalar },
}

impl ScentModel {
    /// Enters regardless of scent.
    pub fn always() -> Self {
        ScentModel::Always
    }

    /// Barely discriminates: enters 90% of the time no matter what.
    pub fn naive() -> Self {
        ScentModel::Stochastic { base: 0.9, slope: 0.0 }
    }

    /// Halfway between naive and savvy.
    pub fn average() -> Self {
        ScentModel::Stochastic { base: 0.5, slope: 0.5 }
    }

    /// Strongly scent-driven: skips low-scent pages, always enters perfect ones.
    pub fn savvy() -> Self {
        ScentModel::Stochastic { base: 0.2, slope: 0.8 }
    }

    /// Entry probability for a given scent in [0, 1].
    pub fn enter_prob(&self, scent: Scalar) -> Scalar {
        match self {
            ScentModel::Always => 1.0,
            ScentModel::Stochastic { base, slope } => (base + slope * scent).clamp(0.0, 1.0),
        }
    }
}

/// Fraction of snippets graded relevant; ungraded snippets count as not.
pub fn serp_scent(serp: &Serp) -> Scalar {
    if serp.snippets.is_empty() {
        return 0.0;
    }
    let rel = serp
        .snippets
        .iter()
        .filter(|s| s.grade.is_some_and(|g| g >= 1))
        .count();
    rel as Scalar / serp.snippets.len() as Scalar
}

/// Decide whether to examine the SERP at all.
pub fn serp_entry_decision<R: Rng + ?Sized>(
    scent: &ScentModel,
    serp: &Serp,
    rng: &mut R,
) -> bool {
    match scent {
        ScentModel::Always => true,
        _ => rng.random::<Scalar>() < scent.enter_prob(serp_scent(serp)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Snippet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn serp(grades: &[Option<i32>]) -> Serp {
        let snippets = grades
            .iter()
            .enumerate()
            .map(|(i, g)| Snippet {
                doc_id: format!("d{i}"),
                rank: i + 1,
                title: vec![],
                excerpt: vec![],
                grade: *g,
            })
            .collect();
        Serp { query: vec![], snippets, k: grades.len().max(1) }
    }

    #[test]
    fn always_enters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(serp_entry_decision(&ScentModel::always(), &serp(&[Some(0)]), &mut rng));
    }

    #[test]
    fn savvy_enters_perfect_serp_with_certainty() {
        assert_eq!(ScentModel::savvy().enter_prob(1.0), 1.0);
        let s = serp(&[Some(3), Some(2), Some(1)]);
        assert_eq!(serp_scent(&s), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            assert!(serp_entry_decision(&ScentModel::savvy(), &s, &mut rng));
        }
    }

    #[test]
    fn naive_ignores_scent() {
        assert_eq!(ScentModel::naive().enter_prob(0.0), 0.9);
        assert_eq!(ScentModel::naive().enter_prob(1.0), 0.9);
    }

    #[test]
    fn scent_counts_graded_relevant_fraction() {
        let s = serp(&[Some(2), Some(0), None, Some(1)]);
        assert_eq!(serp_scent(&s), 0.5);
        assert_eq!(serp_scent(&serp(&[])), 0.0);
    }
}
