use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::filter::FilterMode;
use crate::hash::HashFamily;

/// The experiments the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    ProbeCost,
    IntervalConcentration,
    MaxRun,
    ThreeIndep,
    FilterFpr,
}

impl Experiment {
    pub const ALL: [Self; 5] = [
        Self::ProbeCost,
        Self::IntervalConcentration,
        Self::MaxRun,
        Self::ThreeIndep,
        Self::FilterFpr,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::ProbeCost => "probe_cost",
            Self::IntervalConcentration => "interval_concentration",
            Self::MaxRun => "max_run",
            Self::ThreeIndep => "three_indep",
            Self::FilterFpr => "filter_fpr",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Self::ProbeCost => "mean and p99 insert / absent-search probes per family and n",
            Self::IntervalConcentration => "frequency of near-full dyadic intervals, scaled by 2^(2l)",
            Self::MaxRun => "longest run per table against 16 log2 n",
            Self::ThreeIndep => "mean probes under 3-independent hashing against 8 log2 n",
            Self::FilterFpr => "signature-filter false-positive rate per mode, b and n",
        }
    }

    /// Config fields this experiment reads. Anything else is rejected.
    fn fields(&self) -> &'static [&'static str] {
        match self {
            Self::ProbeCost | Self::ThreeIndep => &["families", "n_values", "load", "trials", "queries", "key_set"],
            Self::IntervalConcentration => &["families", "load", "trials", "table_size", "levels"],
            Self::MaxRun => &["families", "n_values", "load", "trials", "key_set"],
            Self::FilterFpr => &["n_values", "load", "b_values", "trials", "queries", "modes"],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| HarnessError::UnknownExperiment(s.to_owned()))
    }
}

/// Which stored keys a table is built from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeySet {
    /// Distinct keys drawn uniformly from a 32-bit universe.
    #[default]
    Random,
    /// `0, 1, ..., n - 1`.
    Contiguous,
}

/// Experiment parameters as read from a JSON file. Every field is optional;
/// unset fields take per-experiment defaults, see [`ExperimentConfig::resolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub families: Option<Vec<HashFamily>>,
    pub n_values: Option<Vec<usize>>,
    /// Target load `n / t`; `t` is the smallest power of two meeting it.
    pub load: Option<f64>,
    pub b_values: Option<Vec<u32>>,
    /// Table builds per point.
    pub trials: Option<usize>,
    /// Queries per build.
    pub queries: Option<usize>,
    pub table_size: Option<usize>,
    pub levels: Option<Vec<u32>>,
    pub key_set: Option<KeySet>,
    pub modes: Option<Vec<FilterMode>>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

/// Fully defaulted and validated parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub experiment: Experiment,
    pub families: Vec<HashFamily>,
    pub n_values: Vec<usize>,
    pub load: f64,
    pub b_values: Vec<u32>,
    pub trials: usize,
    pub queries: usize,
    pub table_size: usize,
    pub levels: Vec<u32>,
    pub key_set: KeySet,
    pub modes: Vec<FilterMode>,
}

pub const DEFAULT_LOAD: f64 = 2.0 / 3.0;

const POLY: fn(u32) -> HashFamily = |k| HashFamily::Polynomial { k };

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn set_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut note = |set: bool, name| {
            if set {
                out.push(name)
            }
        };
        note(self.families.is_some(), "families");
        note(self.n_values.is_some(), "n_values");
        note(self.load.is_some(), "load");
        note(self.b_values.is_some(), "b_values");
        note(self.trials.is_some(), "trials");
        note(self.queries.is_some(), "queries");
        note(self.table_size.is_some(), "table_size");
        note(self.levels.is_some(), "levels");
        note(self.key_set.is_some(), "key_set");
        note(self.modes.is_some(), "modes");
        out
    }

    /// Fills in defaults for `experiment` and validates the result.
    pub fn resolve(&self, experiment: Experiment) -> Result<Settings, HarnessError> {
        if let Some(field) = self.set_fields().into_iter().find(|f| !experiment.fields().contains(f)) {
            return Err(HarnessError::UnusedField { field, experiment });
        }
        use Experiment::*;
        let families = self.families.clone().unwrap_or_else(|| match experiment {
            ProbeCost => vec![POLY(2), POLY(3), POLY(5), HashFamily::TABULATION_32, HashFamily::TrulyRandom],
            IntervalConcentration => vec![POLY(5), HashFamily::TrulyRandom],
            MaxRun => vec![HashFamily::TABULATION_32, HashFamily::TrulyRandom],
            ThreeIndep => vec![POLY(3)],
            FilterFpr => vec![],
        });
        let n_values = self.n_values.clone().unwrap_or_else(|| match experiment {
            ProbeCost => vec![1 << 10, 1 << 13, 1 << 16],
            MaxRun => vec![1, 1 << 10, 1 << 13, 1 << 16],
            ThreeIndep => vec![2, 1 << 10, 1 << 13, 1 << 16],
            FilterFpr => vec![1 << 14],
            IntervalConcentration => vec![],
        });
        let table_size = self.table_size.unwrap_or(1 << 12);
        let t_bits = table_size.trailing_zeros();
        let levels = self
            .levels
            .clone()
            .unwrap_or_else(|| (0..=8.min(t_bits)).chain((t_bits > 8).then_some(t_bits)).collect());
        let settings = Settings {
            experiment,
            families,
            n_values,
            load: self.load.unwrap_or(DEFAULT_LOAD),
            b_values: self.b_values.clone().unwrap_or_else(|| vec![4, 8, 12]),
            trials: self.trials.unwrap_or(match experiment {
                ProbeCost | ThreeIndep => 20,
                IntervalConcentration => 1000,
                MaxRun => 100,
                FilterFpr => 4,
            }),
            queries: self.queries.unwrap_or(match experiment {
                ThreeIndep => 10_000,
                _ => 100_000,
            }),
            table_size,
            levels,
            key_set: self.key_set.unwrap_or_default(),
            modes: self.modes.clone().unwrap_or_else(|| FilterMode::ALL.to_vec()),
        };
        settings.validate()?;
        Ok(settings)
    }
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

impl Settings {
    fn validate(&self) -> Result<(), HarnessError> {
        if !(self.load > 0.0 && self.load < 1.0) {
            return Err(invalid(format!("load must lie in (0, 1), got {}", self.load)));
        }
        if self.trials == 0 || self.queries == 0 {
            return Err(invalid("trials and queries must be positive"));
        }
        match self.experiment {
            Experiment::FilterFpr => {
                if self.modes.is_empty() || self.b_values.is_empty() {
                    return Err(invalid("modes and b_values must be non-empty"));
                }
                if let Some(b) = self.b_values.iter().find(|&&b| !(1..=64).contains(&b)) {
                    return Err(invalid(format!("signature width {b} outside 1..=64")));
                }
            }
            _ if self.families.is_empty() => return Err(invalid("families must be non-empty")),
            _ => {}
        }
        if self.experiment == Experiment::IntervalConcentration {
            if !self.table_size.is_power_of_two() || self.table_size < 2 {
                return Err(invalid(format!("table_size {} is not a power of two >= 2", self.table_size)));
            }
            let max = self.table_size.trailing_zeros();
            if let Some(l) = self.levels.iter().find(|&&l| l > max) {
                return Err(invalid(format!("level {l} exceeds log2 t = {max}")));
            }
        } else {
            if self.n_values.is_empty() {
                return Err(invalid("n_values must be non-empty"));
            }
            if let Some(n) = self.n_values.iter().find(|&&n| n == 0 || n > 1 << 24) {
                return Err(invalid(format!("n = {n} outside 1..=2^24")));
            }
        }
        Ok(())
    }
}

/// Smallest power of two `t >= 2` with `n / t <= load`.
pub fn table_size_for(n: usize, load: f64) -> usize {
    let mut t = 2;
    while n as f64 > load * t as f64 {
        t <<= 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sizes() {
        assert_eq!(table_size_for(1, DEFAULT_LOAD), 2);
        assert_eq!(table_size_for(2, DEFAULT_LOAD), 4);
        assert_eq!(table_size_for(1 << 10, DEFAULT_LOAD), 2048);
        assert_eq!(table_size_for(1 << 14, DEFAULT_LOAD), 1 << 15);
        // 2/3 of 3 * 2^10 is exactly 2^11
        assert_eq!(table_size_for(2048, DEFAULT_LOAD), 4096);
        assert_eq!(table_size_for(2730, DEFAULT_LOAD), 4096);
    }

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!(matches!(
            "nope".parse::<Experiment>(),
            Err(HarnessError::UnknownExperiment(_))
        ));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"trails": 3}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"families": [{"kind": "polynomial", "k": 5, "x": 1}]}"#).is_err());
        let c = ExperimentConfig::from_json(r#"{"trials": 3, "key_set": "contiguous"}"#).unwrap();
        assert_eq!(c.trials, Some(3));
        assert_eq!(c.key_set, Some(KeySet::Contiguous));
    }

    #[test]
    fn defaults() {
        let c = ExperimentConfig::default();
        let s = c.resolve(Experiment::ProbeCost).unwrap();
        assert_eq!(s.families.len(), 5);
        assert_eq!(s.trials, 20);
        let s = c.resolve(Experiment::IntervalConcentration).unwrap();
        assert_eq!(s.levels, vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 12]);
        let s = c.resolve(Experiment::FilterFpr).unwrap();
        assert_eq!(s.modes.len(), 4);
        assert_eq!(s.b_values, vec![4, 8, 12]);
    }

    #[test]
    fn validation() {
        let bad_load = ExperimentConfig {
            load: Some(1.0),
            ..Default::default()
        };
        assert!(matches!(bad_load.resolve(Experiment::MaxRun), Err(HarnessError::Config(_))));
        let unused = ExperimentConfig {
            b_values: Some(vec![8]),
            ..Default::default()
        };
        assert!(matches!(
            unused.resolve(Experiment::MaxRun),
            Err(HarnessError::UnusedField { field: "b_values", .. })
        ));
        let level = ExperimentConfig {
            table_size: Some(64),
            levels: Some(vec![7]),
            ..Default::default()
        };
        assert!(level.resolve(Experiment::IntervalConcentration).is_err());
        let wide = ExperimentConfig {
            b_values: Some(vec![65]),
            ..Default::default()
        };
        assert!(wide.resolve(Experiment::FilterFpr).is_err());
    }
}
