use rand::Rng;

use super::BehaviorError;
use crate::Scalar;

/// How the user moves down a ranked list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanModel {
    /// Examine exactly the top `k` snippets.
    FixedDepth { k: usize },
    /// Examine rank 1, then continue past each examined snippet with
    /// probability `p`, so rank `i` is examined with probability `p^(i-1)`.
    Persistent { p: Scalar },
    /// Linear traversal that ends at the first click: snippets below a
    /// clicked result are not examined.
    Cascade,
}

/// Per-SERP scanning state. Ranks must be consumed in order 1, 2, 3, ...
#[derive(Debug, Clone)]
pub struct BrowseState {
    next_rank: usize,
    active: bool,
    clicked: bool,
}

impl Default for BrowseState {
    fn default() -> Self {
        Self { next_rank: 1, active: true, clicked: false }
    }
}

impl BrowseState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record that the snippet just examined was clicked.
    pub fn record_click(&mut self) {
        self.clicked = true;
    }

    pub fn clicked(&self) -> bool {
        self.clicked
    }
}

/// Decide whether the snippet at `rank` gets examined.
///
/// Once any variant declines a rank, every later rank is declined too.
pub fn examine_next<R: Rng + ?Sized>(
    scan: &ScanModel,
    rank: usize,
    state: &mut BrowseState,
    rng: &mut R,
) -> Result<bool, BehaviorError> {
    if rank != state.next_rank {
        return Err(BehaviorError::OutOfOrderRank { expected: state.next_rank, got: rank });
    }
    state.next_rank += 1;
    if !state.active {
        return Ok(false);
    }
    let examine = match scan {
        ScanModel::FixedDepth { k } => rank <= *k,
        ScanModel::Persistent { p } => rank == 1 || rng.random::<Scalar>() < *p,
        ScanModel::Cascade => !state.clicked,
    };
    if !examine {
        state.active = false;
    }
    Ok(examine)
}
