//! Exact cyclic linear probing with refill deletion, and the run and
//! dyadic-interval analytics used to reason about its cost.

mod lemma;
mod runs;
mod table;

use thiserror::Error;

use crate::Key;

pub use lemma::{
    near_full_threshold, LemmaChecker, LemmaCounterexample, QueryLemmaOutcome, RunLemmaOutcome,
};
pub use runs::{runs_of, DyadicInterval, Run};
pub use table::{FillViolation, Placement, ProbeTable, SearchOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("table of size {capacity} cannot take another key")]
    Full { capacity: usize },
    #[error("key {0} is not in the table")]
    NotFound(Key),
    #[error("table size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("{slots} slots given for a hash with range {range}")]
    SizeMismatch { slots: usize, range: usize },
    #[error("key {0} is stored twice")]
    Duplicate(Key),
    #[error("every slot is occupied")]
    NoEmptySlot,
    #[error("run of length {len} is shorter than 4 * 2^{level}")]
    RunTooShort { len: usize, level: u32 },
    #[error("level {level} exceeds table size {t}")]
    LevelTooLarge { level: u32, t: usize },
}
