use super::FilterError;
use crate::hash::SlotHash;
use crate::probing::ProbeTable;
use crate::Key;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsequenceVerdict {
    Holds,
    /// The scan of the subsequence table is not a subsequence of the full one.
    Violated { full_scan: Vec<Key>, sub_scan: Vec<Key> },
}

/// True iff `sub` appears in `full` in order (not necessarily contiguously).
pub fn is_subsequence(sub: &[Key], full: &[Key]) -> bool {
    let mut rest = full.iter();
    sub.iter().all(|x| rest.any(|y| y == x))
}

/// True iff every key of `sub` occurs in `full`, order ignored. Quadratic;
/// scans are short.
pub fn is_subset(sub: &[Key], full: &[Key]) -> bool {
    sub.iter().all(|x| full.contains(x))
}

/// Inserts `keys` into one exact table and the entries selected by `mask`
/// into another, both with `hash`; then checks that the keys met scanning
/// from `start` in the second table form a subsequence of those met in the
/// first.
///
/// Only the set version of this always holds: three keys with homes 1, 0, 0
/// inserted in that order scan as `[x2, x1, x3]` from slot 0, while the
/// first and third alone scan as `[x3, x1]`. See [`subset_scan_check`].
pub fn subsequence_scan_check<H: SlotHash>(
    keys: &[Key],
    mask: &[bool],
    hash: &H,
    start: usize,
) -> Result<SubsequenceVerdict, FilterError> {
    scan_check(keys, mask, hash, start, is_subsequence)
}

/// Like [`subsequence_scan_check`], but only requires the keys met in the
/// masked table to be among those met in the full one. This is what the
/// false-positive argument for the filter uses.
pub fn subset_scan_check<H: SlotHash>(
    keys: &[Key],
    mask: &[bool],
    hash: &H,
    start: usize,
) -> Result<SubsequenceVerdict, FilterError> {
    scan_check(keys, mask, hash, start, is_subset)
}

fn scan_check<H: SlotHash>(
    keys: &[Key],
    mask: &[bool],
    hash: &H,
    start: usize,
    relation: fn(&[Key], &[Key]) -> bool,
) -> Result<SubsequenceVerdict, FilterError> {
    if keys.len() != mask.len() {
        return Err(FilterError::MaskLength {
            keys: keys.len(),
            mask: mask.len(),
        });
    }
    let mut full = ProbeTable::new(hash)?;
    let mut sub = ProbeTable::new(hash)?;
    for (&key, &selected) in keys.iter().zip(mask) {
        full.insert(key)?;
        if selected {
            sub.insert(key)?;
        }
    }
    let full_scan = full.scan_from(start);
    let sub_scan = sub.scan_from(start);
    Ok(if relation(&sub_scan, &full_scan) {
        SubsequenceVerdict::Holds
    } else {
        SubsequenceVerdict::Violated { full_scan, sub_scan }
    })
}
