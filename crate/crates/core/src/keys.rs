//! Key sampling for experiments: distinct keys from a 32-bit universe, so
//! every family (including 4x8-bit tabulation) applies.

use std::collections::HashSet;

use rand::Rng;

use crate::Key;

pub const KEY_BITS: u32 = 32;

/// `n` distinct keys below `2^KEY_BITS`, in draw order.
pub fn distinct_keys<R: Rng>(n: usize, rng: &mut R) -> Vec<Key> {
    assert!(n as u64 <= 1 << KEY_BITS, "cannot draw {n} distinct keys");
    let mut seen = HashSet::with_capacity(n);
    let mut keys = Vec::with_capacity(n);
    while keys.len() < n {
        let k = rng.gen_range(0..1u64 << KEY_BITS);
        if seen.insert(k) {
            keys.push(k);
        }
    }
    keys
}

/// `count` keys drawn uniformly from the universe minus `stored`.
/// Repeats are possible.
pub fn absent_keys<R: Rng>(count: usize, stored: &HashSet<Key>, rng: &mut R) -> Vec<Key> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.gen_range(0..1u64 << KEY_BITS);
        if !stored.contains(&k) {
            out.push(k);
        }
    }
    out
}
