//! Checks of the two structural facts linking long runs to near-full
//! dyadic intervals.
//!
//! An `l`-interval is near-full when at least `ceil(3 * 2^l / 4)` keys,
//! other than the query key, hash into it. A run of length `r >= 2^(l+2)`
//! forces one of the first four `l`-intervals meeting it to be near-full;
//! and if the run containing `h(q)` has length in `[2^(l+2), 2^(l+3))`, one
//! of the twelve `l`-intervals from 8 left of `h(q)`'s interval to 3 right of
//! it is near-full. Both facts are stated for non-wrapping runs; wrapping
//! runs are skipped.

use super::runs::interval_count;
use super::{DyadicInterval, ProbeError, ProbeTable, Run};
use crate::hash::SlotHash;
use crate::Key;

/// `ceil(3 * 2^level / 4)`.
pub fn near_full_threshold(level: u32) -> usize {
    (3usize << level).div_ceil(4)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCounterexample {
    pub run: Run,
    pub level: u32,
    pub threshold: usize,
    /// Every interval inspected with its hash count.
    pub intervals: Vec<(DyadicInterval, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunLemmaOutcome {
    Holds { near_full: DyadicInterval, count: usize },
    SkippedWrap,
    Violated(LemmaCounterexample),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryLemmaOutcome {
    /// The run containing `h(q)` is shorter than 4.
    NotApplicable,
    Holds { near_full: DyadicInterval, count: usize },
    SkippedWrap,
    Violated(LemmaCounterexample),
}

/// Per-slot hash counts of a table, with prefix sums for O(1) interval
/// counts. Build once per table and reuse across runs and levels.
pub struct LemmaChecker<'a, H> {
    table: &'a ProbeTable<H>,
    prefix: Vec<usize>,
}

impl<'a, H: SlotHash> LemmaChecker<'a, H> {
    pub fn new(table: &'a ProbeTable<H>) -> Self {
        let t = table.capacity();
        let mut per_slot = vec![0usize; t];
        for k in table.keys() {
            per_slot[table.hash().slot(k)] += 1;
        }
        let mut prefix = Vec::with_capacity(t + 1);
        prefix.push(0);
        for c in per_slot {
            prefix.push(prefix.last().unwrap() + c);
        }
        Self { table, prefix }
    }

    /// Keys hashing into `interval`, minus `exclude` if it is stored and
    /// hashes there.
    pub fn count(&self, interval: DyadicInterval, exclude: Option<Key>) -> usize {
        let raw = self.prefix[interval.end()] - self.prefix[interval.start()];
        match exclude {
            Some(q) if self.table.contains(q) && interval.contains(self.table.hash().slot(q)) => raw - 1,
            _ => raw,
        }
    }

    /// Verifies that one of the first four `level`-intervals meeting `run`
    /// is near-full.
    pub fn check_run(
        &self,
        run: Run,
        level: u32,
        exclude: Option<Key>,
    ) -> Result<RunLemmaOutcome, ProbeError> {
        let t = self.table.capacity();
        let available = interval_count(level, t)?;
        if run.len < 4 << level {
            return Err(ProbeError::RunTooShort {
                len: run.len,
                level,
            });
        }
        if run.wraps(t) {
            return Ok(RunLemmaOutcome::SkippedWrap);
        }
        let first = run.start >> level;
        let intervals: Vec<_> = (first..(first + 4).min(available))
            .map(|index| {
                let iv = DyadicInterval { level, index };
                (iv, self.count(iv, exclude))
            })
            .collect();
        Ok(self.judge(run, level, intervals).map_or_else(
            RunLemmaOutcome::Violated,
            |(near_full, count)| RunLemmaOutcome::Holds { near_full, count },
        ))
    }

    /// Verifies the twelve-interval statement for a query hashing to
    /// `query_slot`.
    pub fn check_query(&self, query_slot: usize, exclude: Option<Key>) -> QueryLemmaOutcome {
        let t = self.table.capacity();
        let Some(run) = self.table.run_at(query_slot) else {
            return QueryLemmaOutcome::NotApplicable;
        };
        if run.len < 4 {
            return QueryLemmaOutcome::NotApplicable;
        }
        if run.wraps(t) {
            return QueryLemmaOutcome::SkippedWrap;
        }
        // r in [2^(level+2), 2^(level+3))
        let level = run.len.ilog2() - 2;
        let available = t >> level;
        let own = query_slot >> level;
        let intervals: Vec<_> = (own.saturating_sub(8)..(own + 4).min(available))
            .map(|index| {
                let iv = DyadicInterval { level, index };
                (iv, self.count(iv, exclude))
            })
            .collect();
        self.judge(run, level, intervals).map_or_else(
            QueryLemmaOutcome::Violated,
            |(near_full, count)| QueryLemmaOutcome::Holds { near_full, count },
        )
    }

    fn judge(
        &self,
        run: Run,
        level: u32,
        intervals: Vec<(DyadicInterval, usize)>,
    ) -> Result<(DyadicInterval, usize), LemmaCounterexample> {
        let threshold = near_full_threshold(level);
        match intervals.iter().find(|(_, c)| *c >= threshold) {
            Some(&hit) => Ok(hit),
            None => Err(LemmaCounterexample {
                run,
                level,
                threshold,
                intervals,
            }),
        }
    }
}

impl<H: SlotHash> ProbeTable<H> {
    pub fn lemma_checker(&self) -> LemmaChecker<'_, H> {
        LemmaChecker::new(self)
    }

    /// One-off form of [`LemmaChecker::check_run`].
    pub fn check_run_lemma(
        &self,
        run: Run,
        level: u32,
        exclude: Option<Key>,
    ) -> Result<RunLemmaOutcome, ProbeError> {
        self.lemma_checker().check_run(run, level, exclude)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::ExplicitHash;

    #[test]
    fn thresholds() {
        assert_eq!(near_full_threshold(0), 1);
        assert_eq!(near_full_threshold(1), 2);
        assert_eq!(near_full_threshold(2), 3);
        assert_eq!(near_full_threshold(3), 6);
        assert_eq!(near_full_threshold(8), 192);
    }

    #[test]
    fn four_keys_in_a_run_of_four() {
        let pairs = [(1, 2), (2, 2), (3, 3), (4, 4)];
        let mut table = ProbeTable::new(ExplicitHash::new(16, pairs).unwrap()).unwrap();
        for (k, _) in pairs {
            table.insert(k).unwrap();
        }
        let run = table.run_at(2).unwrap();
        assert_eq!(run, Run { start: 2, len: 4 });
        let outcome = table.check_run_lemma(run, 0, None).unwrap();
        assert!(matches!(outcome, RunLemmaOutcome::Holds { .. }), "{outcome:?}");
        assert_eq!(
            table.check_run_lemma(run, 1, None),
            Err(ProbeError::RunTooShort { len: 4, level: 1 })
        );
    }

    #[test]
    fn wrapping_runs_are_skipped() {
        let pairs = [(1, 14), (2, 14), (3, 14), (4, 14)];
        let mut table = ProbeTable::new(ExplicitHash::new(16, pairs).unwrap()).unwrap();
        for (k, _) in pairs {
            table.insert(k).unwrap();
        }
        let run = table.run_at(14).unwrap();
        assert!(run.wraps(16));
        assert_eq!(table.check_run_lemma(run, 0, None).unwrap(), RunLemmaOutcome::SkippedWrap);
        assert_eq!(table.lemma_checker().check_query(15, Some(2)), QueryLemmaOutcome::SkippedWrap);
    }

    #[test]
    fn fabricated_layout_is_caught() {
        // a run that no insert sequence could produce: keys hash far away
        let mut layout = vec![None; 32];
        for (slot, key) in (8..16).zip(100..) {
            layout[slot] = Some(key);
        }
        let hash = ExplicitHash::new(32, (100..108).map(|k| (k, 30))).unwrap();
        let table = ProbeTable::from_slots(layout, hash).unwrap();
        let run = table.run_at(8).unwrap();
        match table.check_run_lemma(run, 1, None).unwrap() {
            RunLemmaOutcome::Violated(cx) => {
                assert_eq!(cx.threshold, 2);
                assert_eq!(cx.intervals.len(), 4);
                assert!(cx.intervals.iter().all(|&(_, c)| c == 0));
            }
            other => panic!("expected violation, got {other:?}"),
        }
        assert!(matches!(table.lemma_checker().check_query(9, None), QueryLemmaOutcome::Violated(_)));
    }

    #[test]
    fn query_lemma_on_short_runs() {
        let mut table = ProbeTable::new(ExplicitHash::new(16, [(1, 3), (2, 3)]).unwrap()).unwrap();
        table.insert(1).unwrap();
        table.insert(2).unwrap();
        let checker = table.lemma_checker();
        assert_eq!(checker.check_query(3, Some(1)), QueryLemmaOutcome::NotApplicable);
        assert_eq!(checker.check_query(9, None), QueryLemmaOutcome::NotApplicable);
    }

    #[test]
    fn exclusion_only_applies_to_stored_keys() {
        let mut table = ProbeTable::new(ExplicitHash::new(8, [(1, 0), (2, 1), (9, 0)]).unwrap()).unwrap();
        table.insert(1).unwrap();
        table.insert(2).unwrap();
        let checker = table.lemma_checker();
        let iv = DyadicInterval::containing(0, 1);
        assert_eq!(checker.count(iv, None), 2);
        assert_eq!(checker.count(iv, Some(1)), 1);
        assert_eq!(checker.count(iv, Some(9)), 2);
    }
}
