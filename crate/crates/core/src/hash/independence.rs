//! Exhaustive independence check for polynomial families over tiny primes.

use super::{HashError, PrimeField};

/// Upper bound on both the number of functions `p^k` and value tuples `p^j`.
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceCounterexample {
    /// Distinct keys `x_0 < ... < x_{j-1}`.
    pub keys: Vec<u64>,
    /// Target values `y_0, ..., y_{j-1}`.
    pub values: Vec<u64>,
    /// Functions mapping every `x_i` to `y_i`.
    pub count: u64,
    /// Total number of functions, `p^k`.
    pub functions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceVerdict {
    pub holds: bool,
    pub counterexample: Option<IndependenceCounterexample>,
}

/// Enumerates all `p^k` polynomials of degree `< k` over `Z_p` (range
/// `t = p`, so no mod-t skew) and checks that every `j` distinct keys hit
/// every value tuple with probability exactly `1/p^j`, i.e. that each event
/// is hit by `p^k / p^j` functions.
pub fn verify_independence_exact(p: u64, k: u32, j: u32) -> Result<IndependenceVerdict, HashError> {
    let field = PrimeField::new(p)?;
    if k == 0 {
        return Err(HashError::ZeroDegree);
    }
    if j == 0 || u64::from(j) > p {
        return Err(HashError::TupleSize { j, p });
    }
    let over_budget = HashError::EnumerationBudget {
        p,
        k,
        j,
        budget: ENUMERATION_BUDGET,
    };
    let functions = p
        .checked_pow(k)
        .filter(|&n| n <= ENUMERATION_BUDGET)
        .ok_or_else(|| over_budget.clone())?;
    let events = p
        .checked_pow(j)
        .filter(|&n| n <= ENUMERATION_BUDGET)
        .ok_or(over_budget)?;

    let j = j as usize;
    let mut keys: Vec<u64> = (0..j as u64).collect();
    let mut histogram = vec![0u64; events as usize];
    let mut coefficients = vec![0u64; k as usize];
    loop {
        histogram.iter_mut().for_each(|c| *c = 0);
        coefficients.iter_mut().for_each(|c| *c = 0);
        for _ in 0..functions {
            let cell = keys
                .iter()
                .fold(0u64, |acc, &x| acc * p + field.horner(&coefficients, x));
            histogram[cell as usize] += 1;
            increment_base(&mut coefficients, p);
        }
        if let Some((cell, &count)) = histogram
            .iter()
            .enumerate()
            .find(|(_, &count)| count * events != functions)
        {
            let mut values = vec![0; j];
            let mut rest = cell as u64;
            for v in values.iter_mut().rev() {
                *v = rest % p;
                rest /= p;
            }
            return Ok(IndependenceVerdict {
                holds: false,
                counterexample: Some(IndependenceCounterexample {
                    keys,
                    values,
                    count,
                    functions,
                }),
            });
        }
        if !next_combination(&mut keys, p) {
            break;
        }
    }
    Ok(IndependenceVerdict {
        holds: true,
        counterexample: None,
    })
}

fn increment_base(digits: &mut [u64], base: u64) {
    for d in digits {
        *d += 1;
        if *d < base {
            return;
        }
        *d = 0;
    }
}

/// Advances a sorted combination of `[n]` in lexicographic order.
fn next_combination(combo: &mut [u64], n: u64) -> bool {
    let len = combo.len() as u64;
    for i in (0..combo.len()).rev() {
        if combo[i] < n - len + i as u64 {
            combo[i] += 1;
            for m in i + 1..combo.len() {
                combo[m] = combo[m - 1] + 1;
            }
            return true;
        }
    }
    false
}
