use rand::Rng;

use super::{check_range, HashError, PrimeField, SlotHash};
use crate::{seed, Key};

/// `h'(x) = ((a_{k-1} x^{k-1} + ... + a_0) mod p) mod t`, a k-independent
/// family when the coefficients are uniform in `[p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialHash {
    field: PrimeField,
    coefficients: Vec<u64>,
    mask: u64,
}

impl PolynomialHash {
    /// Draws a k-independent function into `[t]` over 2^61 - 1.
    ///
    /// Requires `p >= 24 t`, which holds for every `t <= 2^56`.
    pub fn new(k: u32, t: u64, seed: u64) -> Result<Self, HashError> {
        let field = PrimeField::mersenne61();
        check_range(t)?;
        if u128::from(field.modulus()) < 24 * u128::from(t) {
            return Err(HashError::PrimeTooSmall {
                p: field.modulus(),
                t,
            });
        }
        Self::in_field(field, k, t, seed)
    }

    /// Draws over an arbitrary prime without the `p >= 24 t` guard. Meant for
    /// exhaustive checks over tiny primes.
    pub fn in_field(field: PrimeField, k: u32, t: u64, seed: u64) -> Result<Self, HashError> {
        if k == 0 {
            return Err(HashError::ZeroDegree);
        }
        let mask = check_range(t)?;
        let mut rng = seed::rng(seed);
        let coefficients = (0..k).map(|_| rng.gen_range(0..field.modulus())).collect();
        Ok(Self {
            field,
            coefficients,
            mask,
        })
    }

    /// Builds a function from explicit coefficients `a_0, a_1, ...`, lowest
    /// degree first. No `p >= 24 t` guard.
    pub fn from_coefficients(
        field: PrimeField,
        coefficients: Vec<u64>,
        t: u64,
    ) -> Result<Self, HashError> {
        if coefficients.is_empty() {
            return Err(HashError::ZeroDegree);
        }
        for &c in &coefficients {
            field.check_residue(c)?;
        }
        let mask = check_range(t)?;
        Ok(Self {
            field,
            coefficients,
            mask,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `a_0, ..., a_{k-1}`.
    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    /// The independence degree `k`, one more than the polynomial degree.
    pub fn independence(&self) -> u32 {
        self.coefficients.len() as u32
    }

    /// The full field value `h(x) = poly(x) mod p`. Requires `x < p`.
    #[inline]
    pub fn field_value(&self, x: Key) -> u64 {
        debug_assert!(x < self.field.modulus(), "key {x} outside the field");
        self.field.horner(&self.coefficients, x)
    }

    /// `h(x) mod t`. Requires `x < p`.
    #[inline]
    pub fn eval(&self, x: Key) -> u64 {
        self.field_value(x) & self.mask
    }
}

impl SlotHash for PolynomialHash {
    fn table_size(&self) -> usize {
        (self.mask + 1) as usize
    }

    #[inline]
    fn slot(&self, key: Key) -> usize {
        self.eval(key) as usize
    }
}
