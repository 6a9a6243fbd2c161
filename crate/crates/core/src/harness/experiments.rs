use std::collections::HashSet;

use rayon::prelude::*;
use statrs::distribution::{Binomial, DiscreteCDF};

use super::config::{table_size_for, KeySet, Settings};
use super::report::{Assertion, ExperimentRow, Report};
use super::{Experiment, HarnessError};
use crate::filter::{measure_fpr_pooled, FilterMode, FilterParams, FprReport};
use crate::hash::{HashFamily, SlotHash};
use crate::probing::{near_full_threshold, ProbeTable};
use crate::{keys, seed, Key};

/// Slack on the longest run: `max_run <= 16 log2 max(n, 2)`.
pub const MAX_RUN_SLACK: f64 = 16.0;
/// Slack on 3-independent means: `mean <= 8 log2 max(n, 2)`.
pub const THREE_INDEP_SLACK: f64 = 8.0;
/// Slack on the scan-length FPR bound: `fpr <= 8 E|X(q)| / 2^b`.
pub const FPR_SLACK: f64 = 8.0;
/// Measured-constant ceiling for paired signatures: `fpr <= 8 / 2^(2b/3)`.
pub const PAIRED_CONSTANT: f64 = 8.0;
/// Largest allowed ratio between mean absent-search costs at different `n`.
pub const FLATNESS_RATIO: f64 = 1.5;
/// Ceiling on `P_l 2^(2l)` checked for levels 2..=8.
pub const INTERVAL_CEILING: f64 = 64.0;
/// The constant the fourth-moment argument itself yields.
pub const INTERVAL_PROOF_CONSTANT: f64 = 40_000.0;
/// Minimum positives at both widths before the `1/2^b` scaling is checked.
pub const MIN_POSITIVES: u64 = 30;

fn log2_floor2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

fn mean(xs: &[u32]) -> f64 {
    xs.iter().map(|&x| u64::from(x)).sum::<u64>() as f64 / xs.len() as f64
}

/// Nearest-rank 99th percentile.
fn p99(xs: &mut [u32]) -> f64 {
    xs.sort_unstable();
    let rank = (0.99 * xs.len() as f64).ceil() as usize;
    f64::from(xs[rank.max(1) - 1])
}

fn check(name: String, passed: bool, detail: String) -> Assertion {
    Assertion { name, passed, detail }
}

struct Emitter {
    experiment: Experiment,
    rows: Vec<ExperimentRow>,
}

impl Emitter {
    fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            rows: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, family: &str, n: usize, t: usize, b: Option<u32>, seed: u64, metric: &str, value: f64) {
        self.rows.push(ExperimentRow {
            experiment: self.experiment,
            family: family.to_owned(),
            n,
            t,
            b,
            seed,
            metric: metric.to_owned(),
            value,
        });
    }

    fn finish(self, assertions: Vec<Assertion>) -> Result<Report, HarnessError> {
        if let Some(r) = self.rows.iter().find(|r| !r.value.is_finite()) {
            return Err(HarnessError::NonFinite { metric: r.metric.clone() });
        }
        Ok(Report {
            experiment: self.experiment,
            rows: self.rows,
            assertions,
        })
    }
}

/// Seed of one `(family, n)` point under `root`.
pub fn point_seed(root: u64, label: &str, n: usize) -> u64 {
    seed::derive_path(root, &[seed::label_stream(label), n as u64])
}

fn stored_keys(key_set: KeySet, n: usize, rng: &mut impl rand::Rng) -> Vec<Key> {
    match key_set {
        KeySet::Random => keys::distinct_keys(n, rng),
        KeySet::Contiguous => (0..n as Key).collect(),
    }
}

/// Probe counts from one table build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeSample {
    pub insert: Vec<u32>,
    /// Probes of unsuccessful searches, including the final empty slot.
    pub search: Vec<u32>,
}

/// Builds a table of `n` keys with a function drawn from `family` and runs
/// `queries` absent searches against it.
pub fn probe_trial(
    family: HashFamily,
    n: usize,
    t: usize,
    key_set: KeySet,
    queries: usize,
    trial_seed: u64,
) -> Result<ProbeSample, HarnessError> {
    let hash = family.draw(t, seed::derive_seed(trial_seed, 0))?;
    let mut rng = seed::rng(seed::derive_seed(trial_seed, 1));
    let stored = stored_keys(key_set, n, &mut rng);
    let mut table = ProbeTable::new(hash)?;
    let insert = stored
        .iter()
        .map(|&k| table.insert(k).map(|p| p.probes as u32))
        .collect::<Result<Vec<_>, _>>()?;
    let set: HashSet<Key> = stored.into_iter().collect();
    let search = keys::absent_keys(queries, &set, &mut rng)
        .into_iter()
        .map(|q| table.search(q).probes as u32)
        .collect();
    Ok(ProbeSample { insert, search })
}

fn probe_point(s: &Settings, family: HashFamily, n: usize, point: u64) -> Result<Vec<ProbeSample>, HarnessError> {
    let t = table_size_for(n, s.load);
    (0..s.trials as u64)
        .into_par_iter()
        .map(|trial| probe_trial(family, n, t, s.key_set, s.queries, seed::derive_seed(point, trial)))
        .collect()
}

/// Families for which constant expected probes are claimed.
fn flat_family(family: &HashFamily) -> bool {
    match family {
        HashFamily::Polynomial { k } => *k >= 5,
        HashFamily::Tabulation { .. } | HashFamily::TrulyRandom => true,
        HashFamily::Linear => false,
    }
}

pub fn probe_cost(s: &Settings, root: u64) -> Result<Report, HarnessError> {
    let mut out = Emitter::new(Experiment::ProbeCost);
    let mut assertions = Vec::new();
    for family in &s.families {
        let label = family.label();
        let mut search_means = Vec::new();
        for &n in &s.n_values {
            let t = table_size_for(n, s.load);
            let point = point_seed(root, &label, n);
            let samples = probe_point(s, *family, n, point)?;
            let trial_means: Vec<f64> = samples.iter().map(|x| mean(&x.search)).collect();
            let mut insert: Vec<u32> = samples.iter().flat_map(|x| x.insert.iter().copied()).collect();
            let mut search: Vec<u32> = samples.iter().flat_map(|x| x.search.iter().copied()).collect();
            let search_mean = mean(&search);
            out.push(&label, n, t, None, point, "insert_mean", mean(&insert));
            out.push(&label, n, t, None, point, "insert_p99", p99(&mut insert));
            out.push(&label, n, t, None, point, "search_mean", search_mean);
            out.push(&label, n, t, None, point, "search_p99", p99(&mut search));
            out.push(&label, n, t, None, point, "search_mean_trial_min", trial_means.iter().copied().fold(f64::INFINITY, f64::min));
            out.push(&label, n, t, None, point, "search_mean_trial_max", trial_means.iter().copied().fold(0.0, f64::max));
            search_means.push((n, search_mean));
        }
        if flat_family(family) && s.key_set == KeySet::Random && search_means.len() > 1 {
            let lo = search_means.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
            let hi = search_means.iter().map(|x| x.1).fold(0.0, f64::max);
            assertions.push(check(
                format!("probe_cost/{label}/search_mean_ratio"),
                hi / lo <= FLATNESS_RATIO,
                format!("max/min mean absent-search probes = {:.4} (limit {FLATNESS_RATIO}); {search_means:?}", hi / lo),
            ));
        }
    }
    out.finish(assertions)
}

pub fn three_indep(s: &Settings, root: u64) -> Result<Report, HarnessError> {
    let mut out = Emitter::new(Experiment::ThreeIndep);
    let mut assertions = Vec::new();
    for family in &s.families {
        let label = family.label();
        for &n in &s.n_values {
            let t = table_size_for(n, s.load);
            let point = point_seed(root, &label, n);
            let samples = probe_point(s, *family, n, point)?;
            let bound = THREE_INDEP_SLACK * log2_floor2(n);
            let insert_trials: Vec<f64> = samples.iter().map(|x| mean(&x.insert)).collect();
            let search_trials: Vec<f64> = samples.iter().map(|x| mean(&x.search)).collect();
            let worst = insert_trials.iter().chain(&search_trials).copied().fold(0.0, f64::max);
            let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            out.push(&label, n, t, None, point, "insert_mean", avg(&insert_trials));
            out.push(&label, n, t, None, point, "search_mean", avg(&search_trials));
            out.push(&label, n, t, None, point, "worst_trial_mean", worst);
            out.push(&label, n, t, None, point, "bound", bound);
            assertions.push(check(
                format!("three_indep/{label}/n{n}"),
                worst <= bound,
                format!("worst per-trial mean probes {worst:.4} vs {THREE_INDEP_SLACK} log2 n = {bound:.1}"),
            ));
        }
    }
    out.finish(assertions)
}

pub fn max_run(s: &Settings, root: u64) -> Result<Report, HarnessError> {
    let mut out = Emitter::new(Experiment::MaxRun);
    let mut assertions = Vec::new();
    for family in &s.families {
        let label = family.label();
        for &n in &s.n_values {
            let t = table_size_for(n, s.load);
            let point = point_seed(root, &label, n);
            let longest = (0..s.trials as u64)
                .into_par_iter()
                .map(|trial| -> Result<usize, HarnessError> {
                    let trial_seed = seed::derive_seed(point, trial);
                    let hash = family.draw(t, seed::derive_seed(trial_seed, 0))?;
                    let mut rng = seed::rng(seed::derive_seed(trial_seed, 1));
                    let mut table = ProbeTable::new(hash)?;
                    for k in stored_keys(s.key_set, n, &mut rng) {
                        table.insert(k)?;
                    }
                    Ok(table.runs()?.iter().map(|r| r.len).max().unwrap_or(0))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let max = longest.iter().copied().max().unwrap_or(0);
            let bound = MAX_RUN_SLACK * log2_floor2(n);
            out.push(&label, n, t, None, point, "max_run_mean", longest.iter().sum::<usize>() as f64 / longest.len() as f64);
            out.push(&label, n, t, None, point, "max_run_max", max as f64);
            out.push(&label, n, t, None, point, "bound", bound);
            assertions.push(check(
                format!("max_run/{label}/n{n}"),
                max as f64 <= bound,
                format!("longest run {max} over {} trials vs {MAX_RUN_SLACK} log2 n = {bound:.1}", s.trials),
            ));
        }
    }
    out.finish(assertions)
}

/// `Pr[Bin(n, 2^level / t) >= ceil(3 2^level / 4)]`: the near-full
/// probability of one interval when every key hashes independently.
pub fn binomial_near_full(n: usize, t: usize, level: u32) -> f64 {
    let p = (1usize << level) as f64 / t as f64;
    let threshold = near_full_threshold(level) as u64;
    if p >= 1.0 {
        return if n as u64 >= threshold { 1.0 } else { 0.0 };
    }
    let dist = Binomial::new(p, n as u64).expect("p in [0, 1)");
    dist.sf(threshold - 1)
}

/// Counts of near-full intervals per requested level, from one table's
/// worth of hash values.
fn near_full_counts(family: HashFamily, n: usize, t: usize, levels: &[u32], trial_seed: u64) -> Result<Vec<u64>, HarnessError> {
    let hash = family.draw(t, seed::derive_seed(trial_seed, 0))?;
    let mut rng = seed::rng(seed::derive_seed(trial_seed, 1));
    let mut per_slot = vec![0usize; t];
    for k in keys::distinct_keys(n, &mut rng) {
        per_slot[hash.slot(k)] += 1;
    }
    Ok(levels
        .iter()
        .map(|&level| {
            let threshold = near_full_threshold(level);
            per_slot
                .chunks(1 << level)
                .filter(|c| c.iter().sum::<usize>() >= threshold)
                .count() as u64
        })
        .collect())
}

pub fn interval_concentration(s: &Settings, root: u64) -> Result<Report, HarnessError> {
    let mut out = Emitter::new(Experiment::IntervalConcentration);
    let mut assertions = Vec::new();
    let t = s.table_size;
    let n = (s.load * t as f64).floor() as usize;
    for family in &s.families {
        let label = family.label();
        let point = point_seed(root, &label, n);
        let counts = (0..s.trials as u64)
            .into_par_iter()
            .map(|trial| near_full_counts(*family, n, t, &s.levels, seed::derive_seed(point, trial)))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, &level) in s.levels.iter().enumerate() {
            let hits: u64 = counts.iter().map(|c| c[i]).sum();
            let samples = (s.trials * (t >> level)) as f64;
            let p_hat = hits as f64 / samples;
            let scaled = p_hat * 4f64.powi(level as i32);
            let oracle = binomial_near_full(n, t, level);
            let oracle_se = (oracle * (1.0 - oracle) / samples).sqrt();
            out.push(&label, n, t, None, point, &format!("p_hat_l{level}"), p_hat);
            out.push(&label, n, t, None, point, &format!("scaled_l{level}"), scaled);
            out.push(&label, n, t, None, point, &format!("binomial_l{level}"), oracle);
            if *family == HashFamily::TrulyRandom {
                assertions.push(check(
                    format!("interval_concentration/{label}/l{level}/binomial"),
                    (p_hat - oracle).abs() <= 4.0 * oracle_se + 1e-12,
                    format!("p_hat {p_hat:.6e} vs independent-binomial {oracle:.6e} (4 se = {:.2e})", 4.0 * oracle_se),
                ));
            }
            if matches!(family, HashFamily::Polynomial { k } if *k >= 5) && (2..=8).contains(&level) {
                assertions.push(check(
                    format!("interval_concentration/{label}/l{level}/ceiling"),
                    scaled <= INTERVAL_CEILING,
                    format!("P_l 2^(2l) = {scaled:.3} vs ceiling {INTERVAL_CEILING}"),
                ));
                assertions.push(check(
                    format!("interval_concentration/{label}/l{level}/proof_constant"),
                    scaled <= INTERVAL_PROOF_CONSTANT,
                    format!("P_l 2^(2l) = {scaled:.3} vs {INTERVAL_PROOF_CONSTANT}"),
                ));
            }
        }
    }
    out.finish(assertions)
}

fn fpr_rows(out: &mut Emitter, r: &FprReport, seed: u64) {
    let p = &r.params;
    let (label, b) = (p.mode.label(), Some(p.signature_bits));
    let mut push = |metric: &str, v: f64| out.push(label, r.n, p.table_size, b, seed, metric, v);
    push("fpr", r.fpr());
    push("fpr_se", r.standard_error());
    push("mean_scan_len", r.mean_scan_len());
    push("scan_bound", r.scan_bound(FPR_SLACK));
    push("paired_constant", r.paired_constant());
    push("false_positives", r.false_positives as f64);
    push("queries", r.queries as f64);
    push("already_positive", r.already_positive as f64);
    push("coherence_violations", r.coherence_violations as f64);
}

fn fpr_assertions(r: &FprReport) -> Vec<Assertion> {
    let p = &r.params;
    let name = |what: &str| format!("filter_fpr/{}/n{}/b{}/{what}", p.mode.label(), r.n, p.signature_bits);
    let mut out = vec![check(
        name("coherence"),
        r.coherence_violations == 0,
        format!("{} queries scanned a key outside X(q)", r.coherence_violations),
    )];
    let slack = 3.0 * r.standard_error();
    match p.mode {
        FilterMode::Independent | FilterMode::TabulationPaired => {
            let bound = r.scan_bound(FPR_SLACK);
            out.push(check(
                name("scan_bound"),
                r.fpr() <= bound + slack,
                format!("fpr {:.4e} vs {FPR_SLACK} E|X(q)|/2^b = {bound:.4e} (+3 se {slack:.2e})", r.fpr()),
            ));
        }
        FilterMode::Paired => {
            let bound = PAIRED_CONSTANT / 2f64.powf(2.0 * f64::from(p.signature_bits) / 3.0);
            out.push(check(
                name("paired_bound"),
                r.fpr() <= bound + slack,
                format!("fpr {:.4e} vs {PAIRED_CONSTANT}/2^(2b/3) = {bound:.4e} (+3 se {slack:.2e})", r.fpr()),
            ));
        }
        FilterMode::HashOfSignature => {}
    }
    out
}

/// `fpr(b_hi) / fpr(b_lo)` must lie within a factor 4 of `2^-(b_hi - b_lo)`.
fn scaling_assertion(lo: &FprReport, hi: &FprReport) -> Option<Assertion> {
    if lo.false_positives < MIN_POSITIVES || hi.false_positives < MIN_POSITIVES {
        return None;
    }
    let gap = hi.params.signature_bits - lo.params.signature_bits;
    let ideal = 2f64.powi(-(gap as i32));
    let ratio = hi.fpr() / lo.fpr();
    Some(check(
        format!(
            "filter_fpr/{}/n{}/b{}_vs_b{}/scaling",
            lo.params.mode.label(),
            lo.n,
            hi.params.signature_bits,
            lo.params.signature_bits
        ),
        ratio >= ideal / 4.0 && ratio <= ideal * 4.0,
        format!("ratio {ratio:.4e} vs [{:.4e}, {:.4e}]", ideal / 4.0, ideal * 4.0),
    ))
}

pub fn filter_fpr(s: &Settings, root: u64) -> Result<Report, HarnessError> {
    let mut out = Emitter::new(Experiment::FilterFpr);
    let mut assertions = Vec::new();
    let points: Vec<(FilterMode, usize, u32)> = s
        .modes
        .iter()
        .flat_map(|&m| s.n_values.iter().flat_map(move |&n| s.b_values.iter().map(move |&b| (m, n, b))))
        .collect();
    let reports = points
        .par_iter()
        .map(|&(mode, n, b)| -> Result<(FprReport, u64), HarnessError> {
            let params = FilterParams::new(mode, b, table_size_for(n, s.load));
            let point = seed::derive_path(root, &[seed::label_stream(mode.label()), n as u64, u64::from(b)]);
            Ok((measure_fpr_pooled(&params, n, s.queries, s.trials, point)?, point))
        })
        .collect::<Result<Vec<_>, _>>()?;
    for (r, point) in &reports {
        fpr_rows(&mut out, r, *point);
        assertions.extend(fpr_assertions(r));
    }
    for (lo, _) in reports.iter().filter(|(r, _)| r.params.mode == FilterMode::Independent) {
        for (hi, _) in &reports {
            let p = &hi.params;
            if p.mode == lo.params.mode && hi.n == lo.n && p.signature_bits == lo.params.signature_bits + 4 {
                assertions.extend(scaling_assertion(lo, hi));
            }
        }
    }
    out.finish(assertions)
}
