use super::ranking::Ranking;
use super::MeasureError;
use crate::num::Float;

/// Session DCG: per-query DCG values combined under a query-position
/// discount.
///
/// Each query's ranking contributes `DCG_b@k / (1 + log_bq(j))` where `j` is
/// the 1-based query position. The within-query DCG uses the
/// `1/(1 + log_b(i))` document discount, so a single-query session equals
/// that query's base-`b` DCG.
pub fn sdcg<F: Float>(
    session: &[Ranking],
    b: F,
    bq: F,
    k: usize,
) -> Result<F, MeasureError> {
    if session.is_empty() {
        return Err(MeasureError::InvalidParam("sdcg needs at least one ranking".into()));
    }
    if bq <= F::ONE {
        return Err(MeasureError::InvalidParam(format!("bq must be > 1, got {bq}")));
    }
    if b <= F::ONE {
        return Err(MeasureError::InvalidParam(format!("b must be > 1, got {b}")));
    }
    let mut total = F::ZERO;
    for (j, ranking) in session.iter().enumerate() {
        let qpos = F::from_count(j + 1);
        let qdiscount = F::ONE / (F::ONE + qpos.ln() / bq.ln());
        total += qdiscount * dcg_base(ranking, b, k);
    }
    Ok(total)
}

fn dcg_base<F: Float>(ranking: &Ranking, b: F, k: usize) -> F {
    ranking
        .grades()
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, &g)| {
            let rank = F::from_count(i + 1);
            F::cast(g as f64) / (F::ONE + rank.ln() / b.ln())
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_query_is_plain_dcg() {
        let r = Ranking::new(vec![3, 1, 0, 2]);
        let expected = dcg_base::<f64>(&r, 2.0, 4);
        assert_abs_diff_eq!(sdcg(&[r], 2.0, 4.0, 4).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn second_query_discounted_by_two_thirds() {
        let r = Ranking::new(vec![2, 2]);
        let one = sdcg(std::slice::from_ref(&r), 2.0, 4.0, 10).unwrap();
        let two = sdcg(&[r.clone(), r], 2.0, 4.0, 10).unwrap();
        assert_abs_diff_eq!(two, one * (1.0 + 2.0 / 3.0), epsilon = 1e-12);
    }

    #[test]
    fn later_queries_weigh_strictly_less() {
        let r = Ranking::new(vec![3]);
        let mut prev_increment = f64::INFINITY;
        let mut prev_total = 0.0;
        for n in 1..=5 {
            let session: Vec<Ranking> = (0..n).map(|_| r.clone()).collect();
            let total = sdcg(&session, 2.0, 4.0, 1).unwrap();
            let inc = total - prev_total;
            assert!(inc < prev_increment);
            prev_increment = inc;
            prev_total = total;
        }
    }

    #[test]
    fn rejects_empty_and_bad_bases() {
        assert!(sdcg::<f64>(&[], 2.0, 4.0, 5).is_err());
        let r = Ranking::new(vec![1]);
        assert!(sdcg(std::slice::from_ref(&r), 2.0, 1.0, 5).is_err());
    }
}
