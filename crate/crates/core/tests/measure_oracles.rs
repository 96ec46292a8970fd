//! Brute-force oracles for the ranking measures.
//!
//! The oracles below are written as plain index loops straight from the
//! metric definitions and stay independent of the library implementations
//! they check.
#![allow(clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simseek_core::measures::{
    average_precision, cwl, dcg_at, err, ndcg_at, precision_at, rbp, CwlModel, Ranking,
};

const G_MAX: i32 = 3;

mod oracle {
    pub fn precision_at(grades: &[i32], k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        let mut rel = 0usize;
        for i in 0..k.min(grades.len()) {
            if grades[i] >= 1 {
                rel += 1;
            }
        }
        rel as f64 / k as f64
    }

    pub fn average_precision(grades: &[i32]) -> f64 {
        let mut rel = 0usize;
        let mut total = 0.0;
        for i in 0..grades.len() {
            if grades[i] >= 1 {
                rel += 1;
                total += rel as f64 / (i + 1) as f64;
            }
        }
        if rel == 0 {
            0.0
        } else {
            total / rel as f64
        }
    }

    pub fn dcg_at(grades: &[i32], k: usize) -> f64 {
        let mut total = 0.0;
        for i in 0..k.min(grades.len()) {
            total += grades[i] as f64 / ((i + 2) as f64).log2();
        }
        total
    }

    pub fn ndcg_at(grades: &[i32], k: usize) -> f64 {
        let mut ideal = grades.to_vec();
        ideal.sort_unstable_by(|a, b| b.cmp(a));
        let denom = dcg_at(&ideal, k);
        if denom > 0.0 {
            dcg_at(grades, k) / denom
        } else {
            0.0
        }
    }

    pub fn rbp(grades: &[i32], p: f64, g_max: i32) -> f64 {
        let mut total = 0.0;
        for i in 0..grades.len() {
            let gain = grades[i] as f64 / g_max as f64;
            total += gain * p.powi(i as i32);
        }
        (1.0 - p) * total
    }

    pub fn err(grades: &[i32], g_max: i32) -> f64 {
        let mut total = 0.0;
        let mut mass = 1.0;
        for i in 0..grades.len() {
            let r = ((2f64).powi(grades[i]) - 1.0) / (2f64).powi(g_max);
            total += mass * r / (i + 1) as f64;
            mass *= 1.0 - r;
        }
        total
    }
}

fn random_rankings(n: usize, max_len: usize, seed: u64) -> Vec<Vec<i32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            (0..len).map(|_| rng.random_range(0..=G_MAX)).collect()
        })
        .collect()
}

#[test]
fn library_matches_oracles_on_a_thousand_rankings() {
    let started = std::time::Instant::now();
    let rankings = random_rankings(1000, 12, 42);
    let tol = 1e-9;
    for grades in &rankings {
        let ranking = Ranking::new(grades.clone());
        for k in [1, 3, 5, 12] {
            assert!(
                (precision_at::<f64>(&ranking, k) - oracle::precision_at(grades, k)).abs() < tol
            );
            assert!((dcg_at::<f64>(&ranking, k) - oracle::dcg_at(grades, k)).abs() < tol);
            assert!((ndcg_at::<f64>(&ranking, k) - oracle::ndcg_at(grades, k)).abs() < tol);
        }
        assert!(
            (average_precision::<f64>(&ranking) - oracle::average_precision(grades)).abs() < tol
        );
        for p in [0.2, 0.5, 0.8, 0.95] {
            assert!((rbp(&ranking, p, G_MAX) - oracle::rbp(grades, p, G_MAX)).abs() < tol);
        }
        assert!((err::<f64>(&ranking, G_MAX) - oracle::err(grades, G_MAX)).abs() < tol);
    }
    assert!(started.elapsed().as_secs_f64() < 1.0, "oracle sweep took too long");
}

#[test]
fn cwl_erg_equals_rbp_for_constant_continuation() {
    let rankings = random_rankings(100, 12, 7);
    for grades in rankings {
        let ranking = Ranking::new(grades);
        for p in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
            let model = CwlModel::constant(p).unwrap();
            let out = cwl::<f64>(&ranking, &model, G_MAX).unwrap();
            let expected = rbp(&ranking, p, G_MAX);
            assert!(
                (out.erg - expected).abs() < 1e-6,
                "p={p}: ERG {} vs RBP {expected}",
                out.erg
            );
            assert!((out.w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!((out.l.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
