//! Approximate membership via linear probing over b-bit signatures.
//!
//! The table holds `t` signatures. A query `q` scans from `h(q)` to the
//! first empty slot and answers yes iff `s(q)` is among the signatures seen.
//! An insert writes `s(x)` into the first empty slot unless `s(x)` is already
//! on the path. There are never false negatives, and there is no deletion:
//! a stored signature may stand in for several keys.

mod fpr;
mod subsequence;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hash::{check_range, DrawnHash, HashError, HashFamily, PolynomialHash, PrimeField, SlotHash, TabulationHash};
use crate::probing::ProbeError;
use crate::{seed, Key};

pub use fpr::{measure_fpr, measure_fpr_pooled, FprReport};
pub use subsequence::{is_subsequence, is_subset, subsequence_scan_check, subset_scan_check, SubsequenceVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("filter of size {capacity} cannot take another signature")]
    Full { capacity: usize },
    #[error("signature width {0} is outside 1..=64")]
    SignatureBits(u32),
    #[error("{slot_bits} slot bits plus {signature_bits} signature bits do not fit the {mode:?} source")]
    PairedWidth {
        mode: FilterMode,
        slot_bits: u32,
        signature_bits: u32,
    },
    #[error("{n} keys do not fit a table of {t} slots")]
    TooManyKeys { n: usize, t: usize },
    #[error("mask has {mask} entries for {keys} keys")]
    MaskLength { keys: usize, mask: usize },
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
}

/// How slot and signature are derived from a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMode {
    /// `h` and `s` drawn from independent seed streams.
    Independent,
    /// High `log2 t` bits and low `b` bits of one degree-4 polynomial value.
    Paired,
    /// Place and search `x` at `h(s(x))`. No guarantee is claimed.
    HashOfSignature,
    /// High and low bits of one simple-tabulation output.
    TabulationPaired,
}

impl FilterMode {
    pub const ALL: [Self; 4] = [
        Self::Independent,
        Self::Paired,
        Self::HashOfSignature,
        Self::TabulationPaired,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Self::Independent => "independent",
            Self::Paired => "paired",
            Self::HashOfSignature => "hash_of_signature",
            Self::TabulationPaired => "tabulation_paired",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterParams {
    pub mode: FilterMode,
    /// Signature width `b`.
    pub signature_bits: u32,
    /// Table size `t`, a power of two.
    pub table_size: usize,
    /// Family of `h` in the independent and hash-of-signature modes.
    pub slot_family: HashFamily,
}

impl FilterParams {
    /// 5-independent placement (a degree-4 polynomial).
    pub fn new(mode: FilterMode, signature_bits: u32, table_size: usize) -> Self {
        Self {
            mode,
            signature_bits,
            table_size,
            slot_family: HashFamily::Polynomial { k: 5 },
        }
    }
}

/// `s(x) = ((a x + b) mod p) mod 2^bits` with `p = 2^61 - 1`: universal up to
/// the mod-`2^bits` rounding. For `bits > 61` only 61 bits vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureHash {
    field: PrimeField,
    a: u64,
    b: u64,
    mask: u64,
}

impl SignatureHash {
    pub fn new(bits: u32, seed: u64) -> Result<Self, FilterError> {
        if !(1..=64).contains(&bits) {
            return Err(FilterError::SignatureBits(bits));
        }
        let field = PrimeField::mersenne61();
        let mut rng = seed::rng(seed);
        let b = rng.gen_range(0..field.modulus());
        let a = rng.gen_range(0..field.modulus());
        let mask = if bits == 64 { u64::MAX } else { (1 << bits) - 1 };
        Ok(Self { field, a, b, mask })
    }

    #[inline]
    pub fn eval(&self, x: Key) -> u64 {
        self.field.add(self.field.mul(self.a, self.field.reduce(x)), self.b) & self.mask
    }
}

/// Maps a key to its `(slot, signature)` pair.
#[derive(Debug, Clone)]
pub enum FilterLocator {
    Independent { slots: DrawnHash, signature: SignatureHash },
    HashOfSignature { slots: DrawnHash, signature: SignatureHash },
    Paired { source: PolynomialHash, signature_bits: u32 },
    TabulationPaired { source: TabulationHash, signature_bits: u32 },
}

impl FilterLocator {
    pub fn new(params: &FilterParams, seed: u64) -> Result<Self, FilterError> {
        let b = params.signature_bits;
        if !(1..=64).contains(&b) {
            return Err(FilterError::SignatureBits(b));
        }
        let slot_bits = check_range(params.table_size as u64)?.count_ones();
        let width_error = FilterError::PairedWidth {
            mode: params.mode,
            slot_bits,
            signature_bits: b,
        };
        Ok(match params.mode {
            FilterMode::Independent => Self::Independent {
                slots: params.slot_family.draw(params.table_size, seed::derive_seed(seed, 0))?,
                signature: SignatureHash::new(b, seed::derive_seed(seed, 1))?,
            },
            FilterMode::HashOfSignature => Self::HashOfSignature {
                slots: params.slot_family.draw(params.table_size, seed::derive_seed(seed, 0))?,
                signature: SignatureHash::new(b, seed::derive_seed(seed, 1))?,
            },
            FilterMode::Paired => {
                let width = slot_bits + b;
                if width >= 64 {
                    return Err(width_error);
                }
                let source = PolynomialHash::new(5, 1 << width, seed::derive_seed(seed, 2))
                    .map_err(|_| width_error)?;
                Self::Paired {
                    source,
                    signature_bits: b,
                }
            }
            FilterMode::TabulationPaired => {
                let width = slot_bits + b;
                if width > 64 {
                    return Err(width_error);
                }
                Self::TabulationPaired {
                    source: TabulationHash::new(8, 8, width, seed::derive_seed(seed, 3))?,
                    signature_bits: b,
                }
            }
        })
    }

    #[inline]
    pub fn locate(&self, key: Key) -> (usize, u64) {
        match self {
            Self::Independent { slots, signature } => (slots.slot(key), signature.eval(key)),
            Self::HashOfSignature { slots, signature } => {
                let s = signature.eval(key);
                (slots.slot(s), s)
            }
            Self::Paired {
                source,
                signature_bits,
            } => split(source.eval(key), *signature_bits),
            Self::TabulationPaired {
                source,
                signature_bits,
            } => split(source.eval(key), *signature_bits),
        }
    }

    fn slot_bits(&self) -> u32 {
        match self {
            Self::Independent { slots, .. } | Self::HashOfSignature { slots, .. } => slots.table_size().ilog2(),
            Self::Paired {
                source,
                signature_bits,
            } => source.table_size().ilog2() - signature_bits,
            Self::TabulationPaired {
                source,
                signature_bits,
            } => source.output_bits() - signature_bits,
        }
    }
}

#[inline]
fn split(value: u64, signature_bits: u32) -> (usize, u64) {
    let slot = value.checked_shr(signature_bits).unwrap_or(0) as usize;
    let sig = if signature_bits == 64 {
        value
    } else {
        value & ((1 << signature_bits) - 1)
    };
    (slot, sig)
}

/// The placement half of a locator, usable to drive an exact shadow table.
impl SlotHash for FilterLocator {
    fn table_size(&self) -> usize {
        1 << self.slot_bits()
    }

    #[inline]
    fn slot(&self, key: Key) -> usize {
        self.locate(key).0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterInsert {
    Inserted { position: usize, probes: usize },
    /// `s(x)` was already on the path; nothing was written.
    AlreadyPositive { position: usize },
}

#[derive(Debug, Clone)]
pub struct SignatureFilter {
    signatures: Vec<u64>,
    occupied: Vec<bool>,
    len: usize,
    mask: usize,
    params: FilterParams,
    locator: FilterLocator,
}

impl SignatureFilter {
    pub fn new(params: FilterParams, seed: u64) -> Result<Self, FilterError> {
        let locator = FilterLocator::new(&params, seed)?;
        Ok(Self::with_locator(params, locator))
    }

    /// A filter over an explicit locator, e.g. to build constructed layouts.
    pub fn with_locator(params: FilterParams, locator: FilterLocator) -> Self {
        let t = locator.table_size();
        Self {
            signatures: vec![0; t],
            occupied: vec![false; t],
            len: 0,
            mask: t - 1,
            params,
            locator,
        }
    }

    pub fn params(&self) -> &FilterParams {
        &self.params
    }

    pub fn locator(&self) -> &FilterLocator {
        &self.locator
    }

    pub fn capacity(&self) -> usize {
        self.signatures.len()
    }

    /// Stored signatures.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Signature at `slot`, if occupied.
    pub fn signature_at(&self, slot: usize) -> Option<u64> {
        self.occupied[slot].then(|| self.signatures[slot])
    }

    pub fn insert(&mut self, key: Key) -> Result<FilterInsert, FilterError> {
        let (mut i, sig) = self.locator.locate(key);
        let mut probes = 1;
        while self.occupied[i] {
            if self.signatures[i] == sig {
                return Ok(FilterInsert::AlreadyPositive { position: i });
            }
            i = (i + 1) & self.mask;
            probes += 1;
        }
        if self.len + 1 >= self.capacity() {
            return Err(FilterError::Full {
                capacity: self.capacity(),
            });
        }
        self.occupied[i] = true;
        self.signatures[i] = sig;
        self.len += 1;
        Ok(FilterInsert::Inserted { position: i, probes })
    }

    pub fn contains(&self, key: Key) -> bool {
        let (mut i, sig) = self.locator.locate(key);
        while self.occupied[i] {
            if self.signatures[i] == sig {
                return true;
            }
            i = (i + 1) & self.mask;
        }
        false
    }

    /// Occupied slots from `h(key)` up to the first empty one.
    pub fn scan_positions(&self, key: Key) -> Vec<usize> {
        let (mut i, _) = self.locator.locate(key);
        let mut out = Vec::new();
        while self.occupied[i] {
            out.push(i);
            i = (i + 1) & self.mask;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::ExplicitHash;

    /// Slots from an explicit map on keys below 256, realized as a one-character
    /// tabulation; signature `s(x) = x mod 2^bits`.
    fn fixed_filter(t: usize, bits: u32, pairs: &[(Key, usize)]) -> SignatureFilter {
        let slots = ExplicitHash::new(t, pairs.iter().copied()).unwrap();
        let table = (0..256u64).map(|k| slots.slot(k) as u64).collect();
        let source = TabulationHash::from_tables(8, t.ilog2(), vec![table]).unwrap();
        let signature = SignatureHash {
            field: PrimeField::mersenne61(),
            a: 1,
            b: 0,
            mask: (1 << bits) - 1,
        };
        let locator = FilterLocator::Independent {
            slots: DrawnHash::Tabulation(source),
            signature,
        };
        SignatureFilter::with_locator(FilterParams::new(FilterMode::Independent, bits, t), locator)
    }

    #[test]
    fn first_insert_lands_on_hash_slot() {
        let mut f = fixed_filter(8, 4, &[(3, 5)]);
        assert_eq!(f.insert(3).unwrap(), FilterInsert::Inserted { position: 5, probes: 1 });
        assert_eq!(f.signature_at(5), Some(3));
        assert!(f.contains(3));
    }

    #[test]
    fn colliding_signature_is_already_positive() {
        // 3 and 19 share slot 5 and signature 3 (mod 16)
        let mut f = fixed_filter(8, 4, &[(3, 5), (19, 5)]);
        f.insert(3).unwrap();
        assert_eq!(f.insert(19).unwrap(), FilterInsert::AlreadyPositive { position: 5 });
        assert_eq!(f.len(), 1);
        assert!(f.contains(19));
    }

    #[test]
    fn distinct_signature_on_path_is_rejected() {
        let mut f = fixed_filter(8, 4, &[(3, 5), (4, 5)]);
        assert!(!f.contains(3));
        f.insert(3).unwrap();
        assert!(!f.contains(4));
        assert_eq!(f.scan_positions(4), vec![5]);
    }

    #[test]
    fn refuses_last_slot() {
        let mut f = fixed_filter(4, 8, &[]);
        for k in 0..3 {
            f.insert(k).unwrap();
        }
        assert_eq!(f.insert(3), Err(FilterError::Full { capacity: 4 }));
    }

    #[test]
    fn no_false_negatives_in_every_mode() {
        let mut rng = seed::rng(4);
        let keys = crate::keys::distinct_keys(2000, &mut rng);
        for mode in FilterMode::ALL {
            let mut f = SignatureFilter::new(FilterParams::new(mode, 8, 4096), 17).unwrap();
            for &k in &keys {
                f.insert(k).unwrap();
            }
            assert!(keys.iter().all(|&k| f.contains(k)), "{mode:?}");
        }
    }

    #[test]
    fn paired_split_uses_high_and_low_bits() {
        let params = FilterParams::new(FilterMode::Paired, 12, 1 << 10);
        let loc = FilterLocator::new(&params, 9).unwrap();
        let FilterLocator::Paired { source, .. } = &loc else { panic!() };
        for k in 0..1000 {
            let v = source.eval(k);
            assert_eq!(loc.locate(k), ((v >> 12) as usize, v & 0xfff));
            assert!(loc.slot(k) < 1 << 10);
        }
        assert_eq!(loc.table_size(), 1 << 10);
    }

    #[test]
    fn independent_streams_differ() {
        let params = FilterParams::new(FilterMode::Independent, 16, 1 << 10);
        let FilterLocator::Independent { slots: DrawnHash::Polynomial(h), signature } =
            FilterLocator::new(&params, 1).unwrap()
        else {
            panic!()
        };
        assert_ne!(h.coefficients()[0] & 0xffff, signature.eval(0));
    }

    #[test]
    fn parameter_validation() {
        assert_eq!(
            SignatureFilter::new(FilterParams::new(FilterMode::Independent, 0, 64), 0).unwrap_err(),
            FilterError::SignatureBits(0)
        );
        assert!(matches!(
            SignatureFilter::new(FilterParams::new(FilterMode::Paired, 50, 1 << 10), 0),
            Err(FilterError::PairedWidth { .. })
        ));
        assert!(matches!(
            SignatureFilter::new(FilterParams::new(FilterMode::TabulationPaired, 60, 1 << 10), 0),
            Err(FilterError::PairedWidth { .. })
        ));
        assert!(SignatureFilter::new(FilterParams::new(FilterMode::Independent, 64, 1 << 10), 0).is_ok());
        assert!(SignatureFilter::new(FilterParams::new(FilterMode::Independent, 8, 100), 0).is_err());
    }
}
