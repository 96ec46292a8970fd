//! Property-based invariants across the crate.

use proptest::prelude::*;

use simseek_core::behavior::{stop_decision, QueryState, QueryStop, StopVerdict};
use simseek_core::corpus::{build_lm, js_divergence, kl_divergence, LanguageModel, Smoothing};
use simseek_core::measures::{dcg_at, err, rbp, Ranking};

// ── Strategies ──────────────────────────────────────────────────────────

fn arb_grades() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(0..=3, 0..14)
}

fn arb_token_text() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]), 1..30)
        .prop_map(|v| v.into_iter().map(String::from).collect())
}

proptest! {
    #[test]
    fn language_models_always_normalize(text in arb_token_text(), lambda in 0.0f64..1.0) {
        let bg = LanguageModel::uniform(["a", "b", "c", "d", "e", "f"]).unwrap();
        let ml = build_lm::<f64>(&[&text], Smoothing::None, None).unwrap();
        prop_assert!(ml.is_normalized());
        let jm = build_lm(&[&text], Smoothing::JelinekMercer { lambda }, Some(&bg)).unwrap();
        prop_assert!(jm.is_normalized());
    }

    #[test]
    fn kl_is_nonnegative_and_zero_only_at_identity(
        p_text in arb_token_text(),
        q_text in arb_token_text(),
    ) {
        let vocab = ["a", "b", "c", "d", "e"];
        let uniform: LanguageModel<f64> = LanguageModel::uniform(vocab).unwrap();
        let smooth = |text: &Vec<String>| -> LanguageModel<f64> {
            build_lm(&[&text[..]], Smoothing::JelinekMercer { lambda: 0.1 }, Some(&uniform))
                .unwrap()
        };
        let p = smooth(&p_text);
        let q = smooth(&q_text);
        let d = kl_divergence(&p, &q).unwrap();
        prop_assert!(d >= -1e-12);
        prop_assert!(kl_divergence(&p, &p).unwrap().abs() < 1e-12);
        if d.abs() < 1e-12 {
            // Zero divergence implies the distributions agree.
            for (t, pv) in p.terms() {
                prop_assert!((pv - q.prob(t)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn js_is_symmetric_and_bounded(p_text in arb_token_text(), q_text in arb_token_text()) {
        let p = build_lm::<f64>(&[&p_text[..]], Smoothing::None, None).unwrap();
        let q = build_lm::<f64>(&[&q_text[..]], Smoothing::None, None).unwrap();
        let d_pq = js_divergence(&p, &q);
        let d_qp = js_divergence(&q, &p);
        prop_assert!((d_pq - d_qp).abs() < 1e-12);
        prop_assert!(d_pq >= -1e-12);
        prop_assert!(d_pq <= std::f64::consts::LN_2 + 1e-12);
    }

    #[test]
    fn promoting_a_better_item_never_hurts(
        grades in arb_grades(),
        swap in 0usize..13,
        p in 0.05f64..0.95,
    ) {
        // Swap a higher-graded item upward one position.
        prop_assume!(grades.len() >= 2);
        let i = swap % (grades.len() - 1);
        prop_assume!(grades[i + 1] > grades[i]);
        let mut better = grades.clone();
        better.swap(i, i + 1);

        let before = Ranking::new(grades);
        let after = Ranking::new(better);
        prop_assert!(dcg_at::<f64>(&after, 14) >= dcg_at::<f64>(&before, 14) - 1e-12);
        prop_assert!(rbp(&after, p, 3) >= rbp(&before, p, 3) - 1e-12);
        prop_assert!(err::<f64>(&after, 3) >= err::<f64>(&before, 3) - 1e-12);
    }

    #[test]
    fn metrics_bounded_for_normalized_gains(grades in arb_grades(), p in 0.0f64..0.95) {
        let ranking = Ranking::new(grades);
        let r = rbp(&ranking, p, 3);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&r));
        let e = err::<f64>(&ranking, 3);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&e));
        let n = simseek_core::measures::ndcg_at::<f64>(&ranking, 14);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&n));
    }
}

proptest! {
    #[test]
    fn satisfaction_or_frustration_fires_no_later_than_either(
        grades in prop::collection::vec(0..=3, 1..25),
        n_sat in 1usize..5,
        n_frus in 1usize..5,
    ) {
        let fire_step = |policy: &QueryStop| -> Option<usize> {
            let mut state = QueryState::new();
            for (i, &g) in grades.iter().enumerate() {
                state.record_examined(i + 1, g);
                if stop_decision(policy, &state, &[]) != StopVerdict::Continue {
                    return Some(i);
                }
            }
            None
        };
        let sat = fire_step(&QueryStop::Satisfaction { n: n_sat });
        let frus = fire_step(&QueryStop::TotalNonrel { n: n_frus });
        let both = fire_step(&QueryStop::SatisfactionOrFrustration { n_sat, n_frus });
        let earliest = match (sat, frus) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        prop_assert_eq!(both, earliest);
    }
}
