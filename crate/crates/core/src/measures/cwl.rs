use super::ranking::Ranking;
use super::{gain, MeasureError};
use crate::num::Float;
use crate::Grade;

/// Continuation probability `C(i)`: chance of browsing past rank `i` having
/// examined it.
#[derive(Debug, Clone, PartialEq)]
pub enum Continuation<F: Float> {
    Constant(F),
    /// `C(i) = table[i-1]` for ranks within the table, 0 beyond it.
    Tabulated(Vec<F>),
}

/// A C/W/L browsing model, truncated where the residual examination mass
/// drops below 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct CwlModel<F: Float> {
    continuation: Continuation<F>,
    depth: usize,
}

impl<F: Float> CwlModel<F> {
    const TAIL: f64 = 1e-9;

    /// Constant continuation probability (the RBP user).
    pub fn constant(p: F) -> Result<Self, MeasureError> {
        if p < F::ZERO || p > F::ONE {
            return Err(MeasureError::InvalidParam(format!(
                "continuation probability {p} outside [0,1]"
            )));
        }
        if p >= F::ONE {
            return Err(MeasureError::NonTerminating);
        }
        let depth = if p == F::ZERO {
            1
        } else {
            // Smallest D with p^D < TAIL.
            let p64 = p.to_f64().unwrap_or(0.0);
            (Self::TAIL.ln() / p64.ln()).ceil() as usize + 1
        };
        Ok(Self { continuation: Continuation::Constant(p), depth })
    }

    /// Rank-indexed continuation probabilities; ranks beyond the table stop.
    pub fn tabulated(table: Vec<F>) -> Result<Self, MeasureError> {
        for &c in &table {
            if c < F::ZERO || c > F::ONE {
                return Err(MeasureError::InvalidParam(format!(
                    "continuation probability {c} outside [0,1]"
                )));
            }
        }
        let depth = table.len() + 1;
        Ok(Self { continuation: Continuation::Tabulated(table), depth })
    }

    pub fn continuation_at(&self, rank: usize) -> F {
        match &self.continuation {
            Continuation::Constant(p) => *p,
            Continuation::Tabulated(t) => t.get(rank - 1).copied().unwrap_or(F::ZERO),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

/// Attention weights, last-rank probabilities, and the two gain aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct CwlOutput<F: Float> {
    /// `W(i)`: fraction of attention on rank i; sums to 1.
    pub w: Vec<F>,
    /// `L(i)`: probability rank i is the last examined; sums to 1.
    pub l: Vec<F>,
    /// Expected rate of gain: `sum_i W(i) * r_i`.
    pub erg: F,
    /// Expected total gain: `sum_i L(i) * CG(i)`, cumulative gain capped at
    /// the truncation depth.
    pub etg: F,
}

/// Evaluate a ranking under a C/W/L browsing model with `g/g_max` gains.
pub fn cwl<F: Float>(
    ranking: &Ranking,
    model: &CwlModel<F>,
    g_max: Grade,
) -> Result<CwlOutput<F>, MeasureError> {
    let depth = model.depth();
    // Unnormalized W(i) = prod_{j<i} C(j).
    let mut examine = Vec::with_capacity(depth);
    let mut mass = F::ONE;
    for rank in 1..=depth {
        examine.push(mass);
        mass = mass * model.continuation_at(rank);
    }
    if mass.to_f64().unwrap_or(1.0) >= CwlModel::<F>::TAIL {
        return Err(MeasureError::NonTerminating);
    }

    let w_total: F = examine.iter().copied().sum();
    let w: Vec<F> = examine.iter().map(|&e| e / w_total).collect();

    let l_raw: Vec<F> = examine
        .iter()
        .enumerate()
        .map(|(i, &e)| e * (F::ONE - model.continuation_at(i + 1)))
        .collect();
    let l_total: F = l_raw.iter().copied().sum();
    let l: Vec<F> = l_raw.iter().map(|&v| v / l_total).collect();

    let r = |i: usize| -> F {
        ranking
            .grades()
            .get(i)
            .map(|&g| gain::<F>(g, g_max))
            .unwrap_or(F::ZERO)
    };

    let erg = w.iter().enumerate().map(|(i, &wi)| wi * r(i)).sum();
    let mut cg = F::ZERO;
    let mut etg = F::ZERO;
    for (i, &li) in l.iter().enumerate() {
        cg += r(i);
        etg += li * cg;
    }

    Ok(CwlOutput { w, l, erg, etg })
}
