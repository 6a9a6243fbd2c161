use std::collections::HashSet;

use super::runs::{interval_count, runs_of};
use super::{DyadicInterval, ProbeError, Run};
use crate::hash::SlotHash;
use crate::Key;

/// Result of [`ProbeTable::insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    /// Where the key now lives.
    pub position: usize,
    /// Slots inspected, including the final one.
    pub probes: usize,
    /// False when the key was already present.
    pub inserted: bool,
}

/// Result of [`ProbeTable::search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    pub position: Option<usize>,
    pub probes: usize,
}

/// A stored key whose cyclic path from its hash slot has a hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillViolation {
    pub key: Key,
    pub position: usize,
    pub empty_slot: usize,
}

/// Open-addressing table of `t` slots with cyclic linear probing.
///
/// At least one slot is always empty, so every scan terminates.
#[derive(Debug, Clone)]
pub struct ProbeTable<H> {
    slots: Vec<Option<Key>>,
    mask: usize,
    len: usize,
    hash: H,
}

impl<H: SlotHash> ProbeTable<H> {
    /// An empty table sized to the hash function's range.
    pub fn new(hash: H) -> Result<Self, ProbeError> {
        let t = hash.table_size();
        if !t.is_power_of_two() {
            return Err(ProbeError::NotPowerOfTwo(t));
        }
        Ok(Self {
            slots: vec![None; t],
            mask: t - 1,
            len: 0,
            hash,
        })
    }

    /// A table with an explicit slot layout. The fill invariant is not
    /// checked; see [`ProbeTable::verify_fill_invariant`].
    pub fn from_slots(slots: Vec<Option<Key>>, hash: H) -> Result<Self, ProbeError> {
        let t = hash.table_size();
        if slots.len() != t {
            return Err(ProbeError::SizeMismatch {
                slots: slots.len(),
                range: t,
            });
        }
        if !t.is_power_of_two() {
            return Err(ProbeError::NotPowerOfTwo(t));
        }
        let mut seen = HashSet::new();
        for key in slots.iter().flatten() {
            if !seen.insert(*key) {
                return Err(ProbeError::Duplicate(*key));
            }
        }
        if seen.len() == t {
            return Err(ProbeError::NoEmptySlot);
        }
        Ok(Self {
            len: seen.len(),
            slots,
            mask: t - 1,
            hash,
        })
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn load(&self) -> f64 {
        self.len as f64 / self.capacity() as f64
    }

    pub fn hash(&self) -> &H {
        &self.hash
    }

    pub fn slots(&self) -> &[Option<Key>] {
        &self.slots
    }

    pub fn keys(&self) -> impl Iterator<Item = Key> + '_ {
        self.slots.iter().flatten().copied()
    }

    pub fn is_occupied(&self, slot: usize) -> bool {
        self.slots[slot & self.mask].is_some()
    }

    pub fn occupancy(&self) -> Vec<bool> {
        self.slots.iter().map(Option::is_some).collect()
    }

    /// Cyclic distance from `from` forward to `to`.
    #[inline]
    fn distance(&self, from: usize, to: usize) -> usize {
        to.wrapping_sub(from) & self.mask
    }

    /// Places `key` at the first empty slot scanning from `h(key)`. Present
    /// keys are left where they are.
    pub fn insert(&mut self, key: Key) -> Result<Placement, ProbeError> {
        let mut i = self.hash.slot(key);
        let mut probes = 1;
        loop {
            match self.slots[i] {
                Some(k) if k == key => {
                    return Ok(Placement {
                        position: i,
                        probes,
                        inserted: false,
                    })
                }
                Some(_) => {
                    i = (i + 1) & self.mask;
                    probes += 1;
                }
                None => {
                    if self.len + 1 >= self.capacity() {
                        return Err(ProbeError::Full {
                            capacity: self.capacity(),
                        });
                    }
                    self.slots[i] = Some(key);
                    self.len += 1;
                    return Ok(Placement {
                        position: i,
                        probes,
                        inserted: true,
                    });
                }
            }
        }
    }

    /// Scans from `h(key)` until `key` or an empty slot.
    pub fn search(&self, key: Key) -> SearchOutcome {
        let mut i = self.hash.slot(key);
        let mut probes = 1;
        loop {
            match self.slots[i] {
                Some(k) if k == key => {
                    return SearchOutcome {
                        position: Some(i),
                        probes,
                    }
                }
                Some(_) => {
                    i = (i + 1) & self.mask;
                    probes += 1;
                }
                None => {
                    return SearchOutcome {
                        position: None,
                        probes,
                    }
                }
            }
        }
    }

    pub fn contains(&self, key: Key) -> bool {
        self.search(key).position.is_some()
    }

    /// Removes `key` and refills the hole: scanning forward to the next
    /// empty slot, any key whose probe path passes through the current hole
    /// is moved back into it, and its old slot becomes the new hole.
    pub fn delete(&mut self, key: Key) -> Result<(), ProbeError> {
        let mut hole = self.search(key).position.ok_or(ProbeError::NotFound(key))?;
        self.slots[hole] = None;
        self.len -= 1;
        let mut j = (hole + 1) & self.mask;
        while let Some(y) = self.slots[j] {
            let home = self.hash.slot(y);
            // y may fill the hole iff the hole lies on y's path home..=j
            if self.distance(home, j) >= self.distance(hole, j) {
                self.slots[hole] = Some(y);
                self.slots[j] = None;
                hole = j;
            }
            j = (j + 1) & self.mask;
        }
        Ok(())
    }

    /// Keys met scanning from `start` up to (excluding) the first empty slot.
    pub fn scan_from(&self, start: usize) -> Vec<Key> {
        let mut i = start & self.mask;
        let mut keys = Vec::new();
        while let Some(k) = self.slots[i] {
            keys.push(k);
            i = (i + 1) & self.mask;
        }
        keys
    }

    /// Checks that every slot between each key's hash and its position is
    /// occupied.
    pub fn verify_fill_invariant(&self) -> Result<(), FillViolation> {
        for (position, key) in self.slots.iter().enumerate() {
            let Some(key) = *key else { continue };
            let mut i = self.hash.slot(key);
            while i != position {
                if self.slots[i].is_none() {
                    return Err(FillViolation {
                        key,
                        position,
                        empty_slot: i,
                    });
                }
                i = (i + 1) & self.mask;
            }
        }
        Ok(())
    }

    pub fn runs(&self) -> Result<Vec<Run>, ProbeError> {
        runs_of(&self.occupancy())
    }

    /// Length of the run containing `slot`, 0 if the slot is empty.
    pub fn run_containing(&self, slot: usize) -> usize {
        let slot = slot & self.mask;
        if self.slots[slot].is_none() {
            return 0;
        }
        let t = self.capacity();
        let back = (1..t)
            .find(|&d| self.slots[(slot + t - d) & self.mask].is_none())
            .unwrap_or(t);
        let forward = (1..t)
            .find(|&d| self.slots[(slot + d) & self.mask].is_none())
            .unwrap_or(t);
        back + forward - 1
    }

    /// The run containing `slot`, if occupied.
    pub fn run_at(&self, slot: usize) -> Option<Run> {
        let slot = slot & self.mask;
        self.slots[slot]?;
        let t = self.capacity();
        let back = (1..t)
            .find(|&d| self.slots[(slot + t - d) & self.mask].is_none())
            .unwrap_or(t);
        Some(Run {
            start: (slot + t + 1 - back) & self.mask,
            len: self.run_containing(slot),
        })
    }

    /// Number of stored keys, other than `exclude`, hashing into `interval`.
    pub fn interval_hash_count(&self, interval: DyadicInterval, exclude: Option<Key>) -> usize {
        self.keys()
            .filter(|&k| Some(k) != exclude && interval.contains(self.hash.slot(k)))
            .count()
    }

    /// `counts[i]` = number of stored keys hashing into level-`level`
    /// interval `i`.
    pub fn interval_histogram(&self, level: u32) -> Result<Vec<usize>, ProbeError> {
        let mut counts = vec![0; interval_count(level, self.capacity())?];
        for k in self.keys() {
            counts[self.hash.slot(k) >> level] += 1;
        }
        Ok(counts)
    }
}
