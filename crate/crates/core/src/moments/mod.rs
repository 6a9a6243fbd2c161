//! Central moments of sums of 0/1 variables and the tail bounds they give.
//!
//! For `X = sum X_i` with `Pr[X_i = 1] = p_i`, `mu = sum p_i` and
//! `sigma^2 = sum p_i (1 - p_i)`:
//!
//! - 4-wise independence gives `E[(X - mu)^4] <= sigma^2 + 3 sigma^4 <= mu + 3 mu^2 <= 4 mu^2`
//!   when `mu >= 1`, hence `Pr[|X - mu| >= d sqrt(mu)] <= 4 / d^4`.
//! - k-wise independence gives `E[(X - mu)^k] <= sum_{c=1}^{floor(k/2)} c^k / c! * sigma^(2c)`.
//!
//! Everything is generic over [`Real`] (`f32`, `f64`).

mod profile;
mod sum;
mod tail;

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use thiserror::Error;

pub use profile::{
    brute_force_moment, exact_fourth_moment, fourth_moment_bound, kth_moment_bound_check,
    kth_moment_sum, BernoulliProfile, FourthMomentBound, KthMomentCheck, MAX_ENUMERATED,
};
pub use sum::NeumaierSum;
pub use tail::{central_moment_estimate, tail_exact, tail_from_counts, tail_sampled, MomentEstimate, TailReport};

/// Floating-point scalar for moment computations.
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    /// Converts a small constant; panics only if the type cannot hold it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error("probability {value} at index {index} is outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },
    #[error("{n} variables exceed the enumeration limit of {max}")]
    TooManyVariables { n: usize, max: usize },
    #[error("mean {0} is below 1")]
    MeanBelowOne(f64),
    #[error("moment order {0} is outside 2..=8")]
    UnsupportedOrder(u32),
    #[error("deviation multiple {0} must be positive")]
    NonPositiveDeviation(f64),
    #[error("no samples")]
    NoSamples,
}
