use super::ProbeError;

/// A maximal cyclic interval of occupied slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: usize,
    pub len: usize,
}

impl Run {
    /// True when the run passes from slot `t - 1` to slot 0.
    pub fn wraps(&self, t: usize) -> bool {
        self.start + self.len > t
    }

    pub fn contains(&self, slot: usize, t: usize) -> bool {
        (slot + t - self.start) % t < self.len
    }

    /// Last occupied slot of the run.
    pub fn last(&self, t: usize) -> usize {
        (self.start + self.len - 1) % t
    }
}

/// Runs of an occupancy map, sorted by start slot.
///
/// Fails when every slot is occupied, since then no run has empty
/// boundaries.
pub fn runs_of(occupied: &[bool]) -> Result<Vec<Run>, ProbeError> {
    let t = occupied.len();
    let Some(empty) = occupied.iter().position(|&o| !o) else {
        return if t == 0 { Ok(Vec::new()) } else { Err(ProbeError::NoEmptySlot) };
    };
    let mut runs = Vec::new();
    let mut current: Option<Run> = None;
    for step in 1..=t {
        let slot = (empty + step) % t;
        match (occupied[slot], current.as_mut()) {
            (true, Some(run)) => run.len += 1,
            (true, None) => current = Some(Run { start: slot, len: 1 }),
            (false, _) => runs.extend(current.take()),
        }
    }
    runs.sort_by_key(|r| r.start);
    Ok(runs)
}

/// The aligned interval `[index * 2^level, (index + 1) * 2^level)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicInterval {
    pub level: u32,
    pub index: usize,
}

impl DyadicInterval {
    pub fn new(level: u32, index: usize, t: usize) -> Result<Self, ProbeError> {
        let count = interval_count(level, t)?;
        if index >= count {
            return Err(ProbeError::LevelTooLarge { level, t });
        }
        Ok(Self { level, index })
    }

    /// The level-`level` interval containing `slot`.
    pub fn containing(slot: usize, level: u32) -> Self {
        Self {
            level,
            index: slot >> level,
        }
    }

    #[allow(clippy::len_without_is_empty)] // never empty
    pub fn len(&self) -> usize {
        1 << self.level
    }

    pub fn start(&self) -> usize {
        self.index << self.level
    }

    /// Exclusive end.
    pub fn end(&self) -> usize {
        (self.index + 1) << self.level
    }

    pub fn contains(&self, slot: usize) -> bool {
        slot >> self.level == self.index
    }
}

/// Number of level-`level` intervals in a table of size `t`.
pub(crate) fn interval_count(level: u32, t: usize) -> Result<usize, ProbeError> {
    if !t.is_power_of_two() {
        return Err(ProbeError::NotPowerOfTwo(t));
    }
    if level >= usize::BITS || (1usize << level) > t {
        return Err(ProbeError::LevelTooLarge { level, t });
    }
    Ok(t >> level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occupancy(t: usize, slots: &[usize]) -> Vec<bool> {
        let mut occ = vec![false; t];
        slots.iter().for_each(|&s| occ[s] = true);
        occ
    }

    #[test]
    fn simple_run() {
        let runs = runs_of(&occupancy(16, &[5, 6, 7])).unwrap();
        assert_eq!(runs, vec![Run { start: 5, len: 3 }]);
        assert!(!runs[0].wraps(16));
        assert_eq!(runs[0].last(16), 7);
    }

    #[test]
    fn empty_table_has_no_runs() {
        assert!(runs_of(&occupancy(16, &[])).unwrap().is_empty());
    }

    #[test]
    fn wrapping_run() {
        let runs = runs_of(&occupancy(16, &[15, 0, 1])).unwrap();
        assert_eq!(runs, vec![Run { start: 15, len: 3 }]);
        assert!(runs[0].wraps(16));
        assert!(runs[0].contains(0, 16) && runs[0].contains(15, 16) && !runs[0].contains(2, 16));
        assert_eq!(runs[0].last(16), 1);
    }

    #[test]
    fn several_runs_sorted() {
        let runs = runs_of(&occupancy(8, &[0, 2, 3, 7])).unwrap();
        assert_eq!(runs, vec![Run { start: 2, len: 2 }, Run { start: 7, len: 2 }]);
    }

    #[test]
    fn full_occupancy_is_an_error() {
        assert_eq!(runs_of(&[true; 4]), Err(ProbeError::NoEmptySlot));
    }

    #[test]
    fn dyadic_geometry() {
        let iv = DyadicInterval::containing(13, 2);
        assert_eq!((iv.index, iv.start(), iv.end(), iv.len()), (3, 12, 16, 4));
        assert!(iv.contains(12) && iv.contains(15) && !iv.contains(16));
        assert!(DyadicInterval::new(4, 0, 16).is_ok());
        assert!(DyadicInterval::new(5, 0, 16).is_err());
        assert!(DyadicInterval::new(2, 4, 16).is_err());
    }
}
