use super::{MomentError, NeumaierSum, Real};

/// Largest `n` for which moments are computed by enumerating `2^n` outcomes.
pub const MAX_ENUMERATED: usize = 20;

/// Success probabilities `p_0..p_{n-1}` of independent 0/1 variables.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliProfile<F> {
    probabilities: Vec<F>,
}

impl<F: Real> BernoulliProfile<F> {
    pub fn new(probabilities: Vec<F>) -> Result<Self, MomentError> {
        for (index, &p) in probabilities.iter().enumerate() {
            if !(p >= F::zero() && p <= F::one()) {
                return Err(MomentError::ProbabilityOutOfRange {
                    index,
                    value: p.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self { probabilities })
    }

    /// `n` copies of `p`: the binomial `Bin(n, p)`.
    pub fn binomial(n: usize, p: F) -> Result<Self, MomentError> {
        Self::new(vec![p; n])
    }

    pub fn probabilities(&self) -> &[F] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// `mu = sum p_i`.
    pub fn mean(&self) -> F {
        self.probabilities.iter().copied().sum::<NeumaierSum<F>>().value()
    }

    /// `sigma^2 = sum p_i (1 - p_i)`.
    pub fn variance(&self) -> F {
        self.probabilities
            .iter()
            .map(|&p| p * (F::one() - p))
            .sum::<NeumaierSum<F>>()
            .value()
    }
}

/// `E[(X - mu)^4]` for independent variables, in O(n):
/// `sum_i E[(X_i - p_i)^4] + 6 sum_{a<b} sigma_a^2 sigma_b^2`, the pair sum
/// taken as `((sum sigma^2)^2 - sum sigma^4) / 2`.
pub fn exact_fourth_moment<F: Real>(profile: &BernoulliProfile<F>) -> F {
    let one = F::one();
    let mut own = NeumaierSum::default();
    let mut var = NeumaierSum::default();
    let mut var_sq = NeumaierSum::default();
    for &p in profile.probabilities() {
        let q = one - p;
        let s2 = p * q;
        own += s2 * (q * q * q + p * p * p);
        var += s2;
        var_sq += s2 * s2;
    }
    let var = var.value();
    let pairs = (var * var - var_sq.value()) / F::lit(2.0);
    own.value() + F::lit(6.0) * pairs
}

/// `E[(X - mu)^k]` by summing over all `2^n` outcomes.
pub fn brute_force_moment<F: Real>(profile: &BernoulliProfile<F>, k: u32) -> Result<F, MomentError> {
    let n = profile.len();
    if n > MAX_ENUMERATED {
        return Err(MomentError::TooManyVariables {
            n,
            max: MAX_ENUMERATED,
        });
    }
    let mu = profile.mean();
    let mut total = NeumaierSum::default();
    for outcome in 0u32..(1 << n) {
        let weight = outcome_probability(profile.probabilities(), outcome);
        let deviation = F::from_u32(outcome.count_ones()).unwrap() - mu;
        total += weight * deviation.powi(k as i32);
    }
    Ok(total.value())
}

pub(crate) fn outcome_probability<F: Real>(probabilities: &[F], outcome: u32) -> F {
    probabilities
        .iter()
        .enumerate()
        .fold(F::one(), |acc, (i, &p)| {
            if outcome >> i & 1 == 1 {
                acc * p
            } else {
                acc * (F::one() - p)
            }
        })
}

/// The 4th-moment bound for `mu >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourthMomentBound<F> {
    /// `mu + 3 mu^2`.
    pub sharp: F,
    /// `4 mu^2`.
    pub loose: F,
}

// Negated comparisons so that NaN is rejected too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn fourth_moment_bound<F: Real>(mu: F) -> Result<FourthMomentBound<F>, MomentError> {
    if !(mu >= F::one()) {
        return Err(MomentError::MeanBelowOne(mu.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(FourthMomentBound {
        sharp: mu + F::lit(3.0) * mu * mu,
        loose: F::lit(4.0) * mu * mu,
    })
}

/// `sum_{c=1}^{floor(k/2)} c^k / c! * sigma2^c`.
pub fn kth_moment_sum<F: Real>(sigma2: F, k: u32) -> F {
    let mut factorial = F::one();
    let mut total = NeumaierSum::default();
    for c in 1..=k / 2 {
        let cf = F::from_u32(c).unwrap();
        factorial = factorial * cf;
        total += cf.powi(k as i32) / factorial * sigma2.powi(c as i32);
    }
    total.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KthMomentCheck<F> {
    pub k: u32,
    pub exact: F,
    pub bound: F,
    pub ok: bool,
}

/// Compares the enumerated `E[(X - mu)^k]` against [`kth_moment_sum`].
/// `k` ranges over `2..=8`; odd `k` use `floor(k/2)` terms. The comparison
/// allows a relative slack of `1e-9` (or 64 ulps for `f32`).
pub fn kth_moment_bound_check<F: Real>(
    profile: &BernoulliProfile<F>,
    k: u32,
) -> Result<KthMomentCheck<F>, MomentError> {
    if !(2..=8).contains(&k) {
        return Err(MomentError::UnsupportedOrder(k));
    }
    let exact = brute_force_moment(profile, k)?;
    let bound = kth_moment_sum(profile.variance(), k);
    let slack = F::lit(1e-9).max(F::epsilon() * F::lit(64.0));
    Ok(KthMomentCheck {
        k,
        exact,
        bound,
        ok: exact <= bound + slack * bound.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(BernoulliProfile::new(vec![0.5, 1.5]).is_err());
        assert!(BernoulliProfile::new(vec![f64::NAN]).is_err());
        assert!(BernoulliProfile::<f64>::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn deterministic_variable_has_no_spread() {
        let p = BernoulliProfile::new(vec![1.0]).unwrap();
        assert_eq!(exact_fourth_moment(&p), 0.0);
        assert_eq!(brute_force_moment(&p, 4).unwrap(), 0.0);
    }

    #[test]
    fn two_fair_coins() {
        // outcomes 0,1,1,2 around mu = 1: (1 + 0 + 0 + 1) / 4
        let p = BernoulliProfile::binomial(2, 0.5).unwrap();
        assert!(close(exact_fourth_moment(&p), 0.5));
        assert!(close(brute_force_moment(&p, 2).unwrap(), 0.5));
    }

    #[test]
    fn three_fair_coins() {
        // Bin(3, 1/2): 2 * (1/8) * 1.5^4 + 6 * (1/8) * 0.5^4 = 1.3125
        let p = BernoulliProfile::binomial(3, 0.5).unwrap();
        assert!(close(exact_fourth_moment(&p), 1.3125));
        assert!(close(brute_force_moment(&p, 4).unwrap(), 1.3125));
    }

    #[test]
    fn first_moment_vanishes() {
        let p = BernoulliProfile::<f64>::new(vec![0.1, 0.7, 0.3, 0.9]).unwrap();
        assert!(brute_force_moment(&p, 1).unwrap().abs() < 1e-15);
        assert!(close(brute_force_moment(&p, 2).unwrap(), p.variance()));
    }

    #[test]
    fn enumeration_limit() {
        let p = BernoulliProfile::binomial(21, 0.5).unwrap();
        assert_eq!(
            brute_force_moment(&p, 4),
            Err(MomentError::TooManyVariables { n: 21, max: 20 })
        );
    }

    #[test]
    fn fourth_bound_values() {
        assert_eq!(fourth_moment_bound(1.0).unwrap(), FourthMomentBound { sharp: 4.0, loose: 4.0 });
        assert_eq!(fourth_moment_bound(2.0).unwrap().loose, 16.0);
        assert_eq!(fourth_moment_bound(2.0).unwrap().sharp, 14.0);
        assert!(fourth_moment_bound(0.5).is_err());
    }

    #[test]
    fn kth_sum_terms() {
        // k = 4: 1 * s + 16/2 * s^2
        assert!(close(kth_moment_sum(0.75, 4), 0.75 + 8.0 * 0.5625));
        assert!(close(kth_moment_sum(2.0, 2), 2.0));
        assert!(close(kth_moment_sum(2.0, 3), 2.0));
    }

    #[test]
    fn kth_check_examples() {
        let coins = BernoulliProfile::binomial(3, 0.5).unwrap();
        let c2 = kth_moment_bound_check(&coins, 2).unwrap();
        assert!(c2.ok && close(c2.exact, c2.bound));
        let c4 = kth_moment_bound_check(&coins, 4).unwrap();
        assert!(c4.ok && close(c4.exact, 1.3125) && close(c4.bound, 5.25));
        let thirds = BernoulliProfile::binomial(10, 1.0 / 3.0).unwrap();
        assert!(kth_moment_bound_check(&thirds, 6).unwrap().ok);
        assert!(kth_moment_bound_check(&thirds, 5).unwrap().ok);
        assert_eq!(kth_moment_bound_check(&thirds, 10), Err(MomentError::UnsupportedOrder(10)));
        assert_eq!(kth_moment_bound_check(&thirds, 1), Err(MomentError::UnsupportedOrder(1)));
    }

    #[test]
    fn single_precision_agrees() {
        let p32 = BernoulliProfile::<f32>::binomial(3, 0.5).unwrap();
        assert!((exact_fourth_moment(&p32) - 1.3125).abs() < 1e-6);
        assert!((brute_force_moment(&p32, 4).unwrap() - 1.3125).abs() < 1e-6);
        assert!(kth_moment_bound_check(&p32, 2).unwrap().ok);
    }
}
