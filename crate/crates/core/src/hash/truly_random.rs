use std::collections::HashMap;
use std::sync::RwLock;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_range, HashError, SlotHash};
use crate::Key;

/// Baseline "truly random" function, realized lazily.
///
/// The value of key `x` is the first output of ChaCha8 keyed by the seed on
/// stream `x`, so it does not depend on which keys were evaluated before it.
/// Values are memoized behind a lock; concurrent evaluation is consistent.
#[derive(Debug)]
pub struct TrulyRandomHash {
    seed: u64,
    mask: u64,
    memo: RwLock<HashMap<Key, usize>>,
}

impl Clone for TrulyRandomHash {
    fn clone(&self) -> Self {
        Self {
            seed: self.seed,
            mask: self.mask,
            memo: RwLock::new(self.memo.read().expect("memo lock poisoned").clone()),
        }
    }
}

impl TrulyRandomHash {
    pub fn new(t: usize, seed: u64) -> Result<Self, HashError> {
        Ok(Self {
            seed,
            mask: check_range(t as u64)?,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of memoized keys.
    pub fn memoized(&self) -> usize {
        self.memo.read().expect("memo lock poisoned").len()
    }

    /// Fills the memo for `keys` up front.
    pub fn prepopulate(&self, keys: impl IntoIterator<Item = Key>) {
        let mut memo = self.memo.write().expect("memo lock poisoned");
        for key in keys {
            memo.entry(key).or_insert_with(|| self.draw(key));
        }
    }

    fn draw(&self, key: Key) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(key);
        (rng.next_u64() & self.mask) as usize
    }
}

impl SlotHash for TrulyRandomHash {
    fn table_size(&self) -> usize {
        (self.mask + 1) as usize
    }

    fn slot(&self, key: Key) -> usize {
        if let Some(&slot) = self.memo.read().expect("memo lock poisoned").get(&key) {
            return slot;
        }
        let slot = self.draw(key);
        *self
            .memo
            .write()
            .expect("memo lock poisoned")
            .entry(key)
            .or_insert(slot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_evaluation_is_stable() {
        let h = TrulyRandomHash::new(1024, 3).unwrap();
        let first: Vec<_> = (0..500).map(|k| h.slot(k)).collect();
        let again: Vec<_> = (0..500).rev().map(|k| h.slot(k)).collect();
        assert!(first.iter().eq(again.iter().rev()));
        assert_eq!(h.memoized(), 500);
    }

    #[test]
    fn evaluation_order_does_not_matter() {
        let a = TrulyRandomHash::new(256, 9).unwrap();
        let b = TrulyRandomHash::new(256, 9).unwrap();
        b.prepopulate([40, 7, 1]);
        assert_eq!(a.slot(7), b.slot(7));
        assert_eq!(a.slot(1), b.slot(1));
        assert_eq!(a.clone().slot(40), b.slot(40));
    }

    #[test]
    fn concurrent_evaluation_agrees() {
        let h = TrulyRandomHash::new(1 << 16, 17).unwrap();
        let results: Vec<Vec<usize>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..4)
                .map(|_| scope.spawn(|| (0..2000).map(|k| h.slot(k)).collect()))
                .collect();
            handles.into_iter().map(|j| j.join().unwrap()).collect()
        });
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn roughly_uniform() {
        let h = TrulyRandomHash::new(4, 1).unwrap();
        let mut counts = [0u32; 4];
        for k in 0..40_000 {
            counts[h.slot(k)] += 1;
        }
        assert!(counts.iter().all(|&c| (9_500..10_500).contains(&c)), "{counts:?}");
    }
}
