//! Deterministic experiments over the tables, filters and hash families.
//!
//! Every experiment is a pure function of its [`Settings`] and a root seed.
//! Each `(family, n)` point gets a seed derived from the root, each trial a
//! seed derived from its point, and trials are collected in index order, so
//! the output does not depend on how many threads run them.

mod config;
mod experiments;
mod report;

use thiserror::Error;

use crate::filter::FilterError;
use crate::hash::HashError;
use crate::probing::ProbeError;

pub use config::{table_size_for, Experiment, ExperimentConfig, KeySet, Settings, DEFAULT_LOAD};
pub use experiments::{
    binomial_near_full, filter_fpr, interval_concentration, max_run, point_seed, probe_cost, probe_trial,
    three_indep, ProbeSample, FLATNESS_RATIO, FPR_SLACK, INTERVAL_CEILING, INTERVAL_PROOF_CONSTANT,
    MAX_RUN_SLACK, MIN_POSITIVES, PAIRED_CONSTANT, THREE_INDEP_SLACK,
};
pub use report::{format_value, Assertion, ExperimentRow, Report, CSV_HEADER};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("config field `{field}` is not used by experiment `{experiment}`")]
    UnusedField { field: &'static str, experiment: Experiment },
    #[error("metric `{metric}` is not finite")]
    NonFinite { metric: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// Resolves `config` for `experiment` and runs it under `root`.
pub fn run_experiment(experiment: Experiment, config: &ExperimentConfig, root: u64) -> Result<Report, HarnessError> {
    let s = config.resolve(experiment)?;
    match experiment {
        Experiment::ProbeCost => probe_cost(&s, root),
        Experiment::IntervalConcentration => interval_concentration(&s, root),
        Experiment::MaxRun => max_run(&s, root),
        Experiment::ThreeIndep => three_indep(&s, root),
        Experiment::FilterFpr => filter_fpr(&s, root),
    }
}
