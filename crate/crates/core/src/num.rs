//! Generic scalar abstraction for the numeric core.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

/// Floating-point scalar for language models, divergences, and measures.
///
/// Implemented for `f32` and `f64`; the rest of the crate works against the
/// [`crate::Scalar`] alias.
pub trait Float:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + AddAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    /// Tolerance for "this distribution sums to one" checks.
    const NORM_EPS: Self;

    /// Lossy cast from an `f64` constant.
    fn cast(v: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(v).expect("finite f64 casts to any Float")
    }

    /// Cast from a count.
    fn from_count(n: usize) -> Self {
        <Self as num_traits::FromPrimitive>::from_usize(n).expect("usize casts to any Float")
    }

    /// Natural logarithm of 2, used by bounded divergences.
    fn ln_two() -> Self {
        Self::cast(std::f64::consts::LN_2)
    }
}

macro_rules! impl_float {
    ($t:ty, $eps:expr) => {
        impl Float for $t {
            const ZERO: Self = 0.0;
            const ONE: Self = 1.0;
            const NORM_EPS: Self = $eps;
        }
    };
}

impl_float!(f32, 1e-4);
impl_float!(f64, 1e-9);
