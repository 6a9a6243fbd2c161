//! Hash families: polynomial over a prime field, linear, simple tabulation,
//! and a memoized truly-random baseline.
//!
//! Every family maps keys into a table of `t` slots where `t` is a power of
//! two; reduction to `[t]` is a bit mask.

mod field;
mod independence;
mod linear;
mod polynomial;
mod tabulation;
mod truly_random;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Key;

pub use field::{PrimeField, MERSENNE_61};
pub use independence::{verify_independence_exact, IndependenceCounterexample, IndependenceVerdict};
pub use linear::LinearHash;
pub use polynomial::PolynomialHash;
pub use tabulation::TabulationHash;
pub use truly_random::TrulyRandomHash;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HashError {
    #[error("table size {0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("table size must be positive")]
    ZeroRange,
    #[error("prime {p} is smaller than 24 * table size {t}")]
    PrimeTooSmall { p: u64, t: u64 },
    #[error("independence degree must be at least 1")]
    ZeroDegree,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residue {value} is not below the modulus {p}")]
    ResidueOutOfRange { value: u64, p: u64 },
    #[error("{chars} characters of {char_bits} bits with {output_bits}-bit output do not fit a 64-bit word")]
    WidthOverflow {
        chars: u32,
        char_bits: u32,
        output_bits: u32,
    },
    #[error("character width {0} gives an oversized lookup table")]
    TableTooLarge(u32),
    #[error("tabulation needs {expected} tables of {len} entries")]
    TableShape { expected: usize, len: usize },
    #[error("enumeration over p={p}, k={k}, j={j} exceeds the budget of {budget} functions or value tuples")]
    EnumerationBudget { p: u64, k: u32, j: u32, budget: u64 },
    #[error("tuple size {j} must be between 1 and the prime {p}")]
    TupleSize { j: u32, p: u64 },
}

/// A hash function with range `[t]`, `t` a power of two.
pub trait SlotHash {
    /// The table size `t`.
    fn table_size(&self) -> usize;
    /// The slot of `key`, always below [`SlotHash::table_size`].
    fn slot(&self, key: Key) -> usize;
}

impl<H: SlotHash + ?Sized> SlotHash for &H {
    fn table_size(&self) -> usize {
        (**self).table_size()
    }

    fn slot(&self, key: Key) -> usize {
        (**self).slot(key)
    }
}

pub(crate) fn check_range(t: u64) -> Result<u64, HashError> {
    if t == 0 {
        Err(HashError::ZeroRange)
    } else if !t.is_power_of_two() {
        Err(HashError::NotPowerOfTwo(t))
    } else {
        Ok(t - 1)
    }
}

/// A family of hash functions from which concrete functions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HashFamily {
    /// Degree `k - 1` polynomial over the Mersenne prime 2^61 - 1.
    Polynomial { k: u32 },
    /// `(a x + b) mod p`, the degree-1 polynomial.
    Linear,
    /// Simple tabulation with `chars` characters of `char_bits` bits each.
    Tabulation { chars: u32, char_bits: u32 },
    TrulyRandom,
}

impl HashFamily {
    /// Four 8-bit characters: covers 32-bit keys.
    pub const TABULATION_32: Self = Self::Tabulation {
        chars: 4,
        char_bits: 8,
    };

    /// Stable short label used in report rows and seed derivation.
    pub fn label(&self) -> String {
        match self {
            Self::Polynomial { k } => format!("poly_k{k}"),
            Self::Linear => "linear".to_owned(),
            Self::Tabulation { chars, char_bits } => format!("tabulation_c{chars}x{char_bits}"),
            Self::TrulyRandom => "truly_random".to_owned(),
        }
    }

    /// Draws a function with range `[t]`.
    pub fn draw(&self, t: usize, seed: u64) -> Result<DrawnHash, HashError> {
        Ok(match *self {
            Self::Polynomial { k } => DrawnHash::Polynomial(PolynomialHash::new(k, t as u64, seed)?),
            Self::Linear => DrawnHash::Linear(LinearHash::new(t as u64, seed)?),
            Self::Tabulation { chars, char_bits } => {
                let bits = check_range(t as u64)?.count_ones();
                DrawnHash::Tabulation(TabulationHash::new(chars, char_bits, bits, seed)?)
            }
            Self::TrulyRandom => DrawnHash::TrulyRandom(TrulyRandomHash::new(t, seed)?),
        })
    }
}

/// A concrete function drawn from one of the families.
#[derive(Debug, Clone)]
pub enum DrawnHash {
    Polynomial(PolynomialHash),
    Linear(LinearHash),
    Tabulation(TabulationHash),
    TrulyRandom(TrulyRandomHash),
}

impl SlotHash for DrawnHash {
    fn table_size(&self) -> usize {
        match self {
            Self::Polynomial(h) => h.table_size(),
            Self::Linear(h) => h.table_size(),
            Self::Tabulation(h) => h.table_size(),
            Self::TrulyRandom(h) => h.table_size(),
        }
    }

    #[inline]
    fn slot(&self, key: Key) -> usize {
        match self {
            Self::Polynomial(h) => h.slot(key),
            Self::Linear(h) => h.slot(key),
            Self::Tabulation(h) => h.slot(key),
            Self::TrulyRandom(h) => h.slot(key),
        }
    }
}

/// A hand-specified function, for constructing exact table layouts.
/// Keys without an entry hash to `key mod t`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExplicitHash {
    mask: usize,
    slots: std::collections::HashMap<Key, usize>,
}

impl ExplicitHash {
    pub fn new(t: usize, pairs: impl IntoIterator<Item = (Key, usize)>) -> Result<Self, HashError> {
        let mask = check_range(t as u64)? as usize;
        Ok(Self {
            mask,
            slots: pairs.into_iter().map(|(k, s)| (k, s & mask)).collect(),
        })
    }

    pub fn set(&mut self, key: Key, slot: usize) {
        self.slots.insert(key, slot & self.mask);
    }
}

impl SlotHash for ExplicitHash {
    fn table_size(&self) -> usize {
        self.mask + 1
    }

    fn slot(&self, key: Key) -> usize {
        self.slots
            .get(&key)
            .copied()
            .unwrap_or(key as usize & self.mask)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_draws_into_range() {
        let families = [
            HashFamily::Polynomial { k: 5 },
            HashFamily::Linear,
            HashFamily::TABULATION_32,
            HashFamily::TrulyRandom,
        ];
        for family in families {
            let h = family.draw(64, 11).unwrap();
            assert_eq!(h.table_size(), 64);
            for key in 0..1000 {
                assert!(h.slot(key) < 64, "{}", family.label());
            }
        }
    }

    #[test]
    fn draws_reject_bad_sizes() {
        for family in [HashFamily::Polynomial { k: 2 }, HashFamily::TrulyRandom, HashFamily::TABULATION_32] {
            assert_eq!(family.draw(0, 1).unwrap_err(), HashError::ZeroRange);
            assert_eq!(family.draw(12, 1).unwrap_err(), HashError::NotPowerOfTwo(12));
        }
    }

    #[test]
    fn family_json_shape() {
        let family: HashFamily = serde_json::from_str(r#"{"kind":"polynomial","k":5}"#).unwrap();
        assert_eq!(family, HashFamily::Polynomial { k: 5 });
        let family: HashFamily = serde_json::from_str(r#"{"kind":"truly_random"}"#).unwrap();
        assert_eq!(family.label(), "truly_random");
        assert!(serde_json::from_str::<HashFamily>(r#"{"kind":"polynomial","k":5,"degree":4}"#).is_err());
    }
}
