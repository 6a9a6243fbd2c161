//! Splittable seed derivation.
//!
//! Every experiment has one root seed. Child seeds are derived by keying a
//! ChaCha8 generator with the parent seed and selecting the child's stream
//! index, so a child seed depends only on `(parent, stream)` and never on
//! the order in which children are requested.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Derives the seed for child `stream` of `parent`.
pub fn derive_seed(parent: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(parent);
    rng.set_stream(stream);
    rng.next_u64()
}

/// Derives a seed along a path of stream indices, e.g. `(family, n, trial)`.
pub fn derive_path(root: u64, path: &[u64]) -> u64 {
    path.iter().fold(root, |seed, &stream| derive_seed(seed, stream))
}

/// Stable 64-bit stream index for a label (FNV-1a).
pub fn label_stream(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |acc, byte| {
        (acc ^ u64::from(byte)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// A deterministic generator for the given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
