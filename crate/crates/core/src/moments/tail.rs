use rand::Rng;

use super::profile::{kth_moment_sum, outcome_probability, MAX_ENUMERATED};
use super::{BernoulliProfile, MomentError, NeumaierSum, Real};
use crate::seed;

/// `Pr[|X - mu| >= d sqrt(mu)]`, exact or sampled, next to the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport<F> {
    pub d: F,
    pub k: u32,
    pub mean: F,
    pub empirical: F,
    /// Zero for exact reports.
    pub standard_error: F,
    /// `None` for exact enumeration.
    pub trials: Option<u64>,
    /// `1 / d^2`.
    pub chebyshev: F,
    /// `4 / d^4`.
    pub fourth: F,
    /// `sum_{c<=k/2} c^k/c! sigma^(2c) / (d^k mu^(k/2))`.
    pub kth: F,
}

impl<F: Real> TailReport<F> {
    /// True when `4 / d^4 >= 1`, i.e. the bound says nothing.
    pub fn fourth_is_vacuous(&self) -> bool {
        self.fourth >= F::one()
    }

    /// `empirical <= bound + 3 * standard_error`.
    pub fn within(&self, bound: F) -> bool {
        self.empirical <= bound + F::lit(3.0) * self.standard_error
    }
}

// Negated comparisons so that NaN is rejected too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn validate<F: Real>(mean: F, d: F) -> Result<(), MomentError> {
    if !(d > F::zero()) {
        return Err(MomentError::NonPositiveDeviation(d.to_f64().unwrap_or(f64::NAN)));
    }
    if !(mean >= F::one()) {
        return Err(MomentError::MeanBelowOne(mean.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// `|x - mu| >= d sqrt(mu)`, forgiving a few ulps so that e.g.
/// `d = sqrt(2), mu = 2` puts the threshold at exactly 2.
fn deviates<F: Real>(x: F, mean: F, threshold: F) -> bool {
    (x - mean).abs() >= threshold * (F::one() - F::epsilon() * F::lit(8.0))
}

fn report<F: Real>(profile_var: F, mean: F, d: F, k: u32, empirical: F, se: F, trials: Option<u64>) -> TailReport<F> {
    let d2 = d * d;
    TailReport {
        d,
        k,
        mean,
        empirical,
        standard_error: se,
        trials,
        chebyshev: d2.recip(),
        fourth: F::lit(4.0) / (d2 * d2),
        kth: kth_moment_sum(profile_var, k) / (d.powi(k as i32) * mean.powf(F::from_u32(k).unwrap() / F::lit(2.0))),
    }
}

/// Exact tail probability by enumerating all outcomes (`n <= 20`).
pub fn tail_exact<F: Real>(profile: &BernoulliProfile<F>, d: F, k: u32) -> Result<TailReport<F>, MomentError> {
    let n = profile.len();
    if n > MAX_ENUMERATED {
        return Err(MomentError::TooManyVariables {
            n,
            max: MAX_ENUMERATED,
        });
    }
    let mean = profile.mean();
    validate(mean, d)?;
    let threshold = d * mean.sqrt();
    let mut mass = NeumaierSum::default();
    for outcome in 0u32..(1 << n) {
        let x = F::from_u32(outcome.count_ones()).unwrap();
        if deviates(x, mean, threshold) {
            mass += outcome_probability(profile.probabilities(), outcome);
        }
    }
    Ok(report(profile.variance(), mean, d, k, mass.value(), F::zero(), None))
}

/// Monte Carlo estimate from `trials` independent draws of `X`.
pub fn tail_sampled<F: Real>(
    profile: &BernoulliProfile<F>,
    d: F,
    k: u32,
    trials: u64,
    seed: u64,
) -> Result<TailReport<F>, MomentError> {
    let mut rng = seed::rng(seed);
    let probabilities: Vec<f64> = profile
        .probabilities()
        .iter()
        .map(|p| p.to_f64().unwrap())
        .collect();
    let counts: Vec<u64> = (0..trials)
        .map(|_| probabilities.iter().filter(|&&p| rng.gen::<f64>() < p).count() as u64)
        .collect();
    tail_from_counts(&counts, profile.mean(), profile.variance(), d, k)
}

/// Tail report from observed values of `X` with known `mu` and `sigma^2`.
pub fn tail_from_counts<F: Real>(
    counts: &[u64],
    mean: F,
    variance: F,
    d: F,
    k: u32,
) -> Result<TailReport<F>, MomentError> {
    validate(mean, d)?;
    if counts.is_empty() {
        return Err(MomentError::NoSamples);
    }
    let threshold = d * mean.sqrt();
    let hits = counts
        .iter()
        .filter(|&&x| deviates(F::from_u64(x).unwrap(), mean, threshold))
        .count();
    let trials = counts.len() as u64;
    let n = F::from_u64(trials).unwrap();
    let p = F::from_usize(hits).unwrap() / n;
    let se = (p * (F::one() - p) / n).sqrt();
    Ok(report(variance, mean, d, k, p, se, Some(trials)))
}

/// Sample mean of `(x - mu)^k` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate<F> {
    pub mean: F,
    pub standard_error: F,
}

pub fn central_moment_estimate<F: Real>(samples: &[F], mu: F, k: u32) -> Result<MomentEstimate<F>, MomentError> {
    if samples.is_empty() {
        return Err(MomentError::NoSamples);
    }
    let n = F::from_usize(samples.len()).unwrap();
    let powers: Vec<F> = samples.iter().map(|&x| (x - mu).powi(k as i32)).collect();
    let mean = powers.iter().copied().sum::<NeumaierSum<F>>().value() / n;
    let var = powers
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<NeumaierSum<F>>()
        .value()
        / n;
    Ok(MomentEstimate {
        mean,
        standard_error: (var / n).sqrt(),
    })
}
