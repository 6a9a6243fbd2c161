use rand::Rng;

use super::{check_range, HashError, PrimeField, SlotHash};
use crate::{seed, Key};

/// `x -> ((a x + b) mod p) mod t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearHash {
    field: PrimeField,
    a: u64,
    b: u64,
    mask: u64,
}

impl LinearHash {
    /// Draws `a, b` uniformly from `[p]`, `p = 2^61 - 1`, with `p >= 24 t`.
    pub fn new(t: u64, seed: u64) -> Result<Self, HashError> {
        let field = PrimeField::mersenne61();
        check_range(t)?;
        if u128::from(field.modulus()) < 24 * u128::from(t) {
            return Err(HashError::PrimeTooSmall {
                p: field.modulus(),
                t,
            });
        }
        let mut rng = seed::rng(seed);
        // same draw order as a two-coefficient polynomial: a_0 = b, a_1 = a
        let b = rng.gen_range(0..field.modulus());
        let a = rng.gen_range(0..field.modulus());
        Self::from_parts(field, a, b, t)
    }

    pub fn from_parts(field: PrimeField, a: u64, b: u64, t: u64) -> Result<Self, HashError> {
        Ok(Self {
            field,
            a: field.check_residue(a)?,
            b: field.check_residue(b)?,
            mask: check_range(t)?,
        })
    }

    pub fn slope(&self) -> u64 {
        self.a
    }

    pub fn intercept(&self) -> u64 {
        self.b
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn field_value(&self, x: Key) -> u64 {
        debug_assert!(x < self.field.modulus(), "key {x} outside the field");
        self.field.add(self.field.mul(self.a, x), self.b)
    }

    #[inline]
    pub fn eval(&self, x: Key) -> u64 {
        self.field_value(x) & self.mask
    }
}

impl SlotHash for LinearHash {
    fn table_size(&self) -> usize {
        (self.mask + 1) as usize
    }

    #[inline]
    fn slot(&self, key: Key) -> usize {
        self.eval(key) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::{PolynomialHash, MERSENNE_61};

    #[test]
    fn zero_slope_is_constant() {
        let h = LinearHash::from_parts(PrimeField::mersenne61(), 0, 12345, 8).unwrap();
        for x in [0, 1, 99, MERSENNE_61 - 1] {
            assert_eq!(h.eval(x), 12345 % 8);
        }
    }

    #[test]
    fn hand_computed_value() {
        let h = LinearHash::from_parts(PrimeField::new(7).unwrap(), 3, 2, 4).unwrap();
        assert_eq!(h.eval(5), 3);
    }

    #[test]
    fn agrees_with_two_coefficient_polynomial() {
        let h = LinearHash::new(1 << 12, 77).unwrap();
        let poly =
            PolynomialHash::from_coefficients(h.field(), vec![h.intercept(), h.slope()], 1 << 12).unwrap();
        let mut rng = seed::rng(3);
        for _ in 0..10_000 {
            let x = rng.gen_range(0..MERSENNE_61);
            assert_eq!(h.eval(x), poly.eval(x));
        }
        // seeded draw order mirrors PolynomialHash::new with k = 2
        let drawn = PolynomialHash::new(2, 1 << 12, 77).unwrap();
        assert_eq!(drawn.coefficients(), &[h.intercept(), h.slope()]);
    }

    #[test]
    fn rejects_bad_parts() {
        let f = PrimeField::new(7).unwrap();
        assert!(LinearHash::from_parts(f, 7, 0, 4).is_err());
        assert!(LinearHash::from_parts(f, 1, 0, 3).is_err());
        assert!(LinearHash::new(1 << 60, 0).is_err());
    }
}
