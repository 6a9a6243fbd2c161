use std::collections::HashSet;

use rayon::prelude::*;

use super::{is_subset, FilterError, FilterInsert, FilterParams, SignatureFilter};
use crate::probing::ProbeTable;
use crate::{keys, seed, Key};

/// False-positive measurement for one or more filter builds.
#[derive(Debug, Clone, PartialEq)]
pub struct FprReport {
    pub params: FilterParams,
    pub n: usize,
    pub builds: usize,
    pub queries: u64,
    pub false_positives: u64,
    /// Sum over queries of `|X(q)|`, the keys an exact table with the same
    /// `h` scans from `h(q)` to the first empty slot.
    pub scanned_keys: u64,
    /// Inserts skipped because `s(x)` was already on the path.
    pub already_positive: u64,
    /// Queries whose filter scan met a signature from a key outside `X(q)`.
    pub coherence_violations: u64,
}

impl FprReport {
    pub fn fpr(&self) -> f64 {
        self.false_positives as f64 / self.queries as f64
    }

    /// Binomial standard error of [`FprReport::fpr`].
    pub fn standard_error(&self) -> f64 {
        let p = self.fpr();
        (p * (1.0 - p) / self.queries as f64).sqrt()
    }

    /// Measured `E[|X(q)|]`.
    pub fn mean_scan_len(&self) -> f64 {
        self.scanned_keys as f64 / self.queries as f64
    }

    /// `slack * E[|X(q)|] / 2^b`.
    pub fn scan_bound(&self, slack: f64) -> f64 {
        slack * self.mean_scan_len() / 2f64.powi(self.params.signature_bits as i32)
    }

    /// `fpr * 2^(2b/3)`, the constant implied for paired pairs.
    pub fn paired_constant(&self) -> f64 {
        self.fpr() * 2f64.powf(2.0 * f64::from(self.params.signature_bits) / 3.0)
    }

    fn absorb(&mut self, other: &Self) {
        self.builds += other.builds;
        self.queries += other.queries;
        self.false_positives += other.false_positives;
        self.scanned_keys += other.scanned_keys;
        self.already_positive += other.already_positive;
        self.coherence_violations += other.coherence_violations;
    }
}

/// Builds a filter over `n` random keys, issues `queries` non-member
/// queries, and compares each scan to an exact shadow table that uses the
/// same placement function.
pub fn measure_fpr(params: &FilterParams, n: usize, queries: usize, seed: u64) -> Result<FprReport, FilterError> {
    let t = params.table_size;
    if n >= t {
        return Err(FilterError::TooManyKeys { n, t });
    }
    let mut filter = SignatureFilter::new(*params, seed::derive_seed(seed, 0))?;
    let mut shadow = ProbeTable::new(filter.locator().clone())?;
    let mut rng = seed::rng(seed::derive_seed(seed, 1));
    let stored = keys::distinct_keys(n, &mut rng);
    let stored_set: HashSet<Key> = stored.iter().copied().collect();

    let mut owners: Vec<Option<Key>> = vec![None; t];
    let mut already_positive = 0;
    for &key in &stored {
        match filter.insert(key)? {
            FilterInsert::Inserted { position, .. } => owners[position] = Some(key),
            FilterInsert::AlreadyPositive { .. } => already_positive += 1,
        }
        shadow.insert(key)?;
    }

    let mut report = FprReport {
        params: *params,
        n,
        builds: 1,
        queries: queries as u64,
        false_positives: 0,
        scanned_keys: 0,
        already_positive,
        coherence_violations: 0,
    };
    for q in keys::absent_keys(queries, &stored_set, &mut rng) {
        if filter.contains(q) {
            report.false_positives += 1;
        }
        let exact = shadow.scan_from(filter.locator().locate(q).0);
        report.scanned_keys += exact.len() as u64;
        let seen: Vec<Key> = filter
            .scan_positions(q)
            .into_iter()
            .map(|pos| owners[pos].expect("occupied filter slot without owner"))
            .collect();
        if !is_subset(&seen, &exact) {
            report.coherence_violations += 1;
        }
    }
    Ok(report)
}

/// [`measure_fpr`] over `builds >= 1` independently seeded filters, pooled.
/// Builds run in parallel; the result does not depend on scheduling.
pub fn measure_fpr_pooled(
    params: &FilterParams,
    n: usize,
    queries_per_build: usize,
    builds: usize,
    seed: u64,
) -> Result<FprReport, FilterError> {
    assert!(builds > 0, "no builds requested");
    let reports = (0..builds as u64)
        .into_par_iter()
        .map(|build| measure_fpr(params, n, queries_per_build, seed::derive_seed(seed, build)))
        .collect::<Result<Vec<_>, _>>()?;
    let (first, rest) = reports.split_first().expect("builds > 0");
    let mut pooled = first.clone();
    rest.iter().for_each(|r| pooled.absorb(r));
    Ok(pooled)
}
