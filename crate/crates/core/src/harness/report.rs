use std::io::Write;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::{Experiment, HarnessError};

pub const CSV_HEADER: [&str; 8] = ["experiment", "family", "n", "t", "b", "seed", "metric", "value"];

/// One measured value, with everything needed to rerun the point alone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub experiment: Experiment,
    pub family: String,
    pub n: usize,
    pub t: usize,
    /// Signature width; filter rows only.
    pub b: Option<u32>,
    /// Seed of the point (all trials derive from it).
    pub seed: u64,
    pub metric: String,
    #[serde(serialize_with = "raw_float")]
    pub value: f64,
}

/// A pass/fail check evaluated over the rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: Experiment,
    pub rows: Vec<ExperimentRow>,
    pub assertions: Vec<Assertion>,
}

/// 17 significant digits: parses back to the same bits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn raw_float<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(format_value(*v)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

impl Report {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }

    /// Rows whose metric is exactly `metric`.
    pub fn metric<'a>(&'a self, metric: &'a str) -> impl Iterator<Item = &'a ExperimentRow> {
        self.rows.iter().filter(move |r| r.metric == metric)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let b = r.b.map(|b| b.to_string()).unwrap_or_default();
            w.write_record([
                r.experiment.name(),
                &r.family,
                &r.n.to_string(),
                &r.t.to_string(),
                &b,
                &r.seed.to_string(),
                &r.metric,
                &format_value(r.value),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), HarnessError> {
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            experiment: Experiment::MaxRun,
            rows: vec![
                ExperimentRow {
                    experiment: Experiment::MaxRun,
                    family: "truly_random".into(),
                    n: 1024,
                    t: 2048,
                    b: None,
                    seed: 7,
                    metric: "max_run_mean".into(),
                    value: 0.1,
                },
                ExperimentRow {
                    experiment: Experiment::MaxRun,
                    family: "truly_random".into(),
                    n: 1024,
                    t: 2048,
                    b: Some(8),
                    seed: 7,
                    metric: "bound".into(),
                    value: -160.0,
                },
            ],
            assertions: vec![],
        }
    }

    #[test]
    fn float_text_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456789.123, f64::MIN_POSITIVE, -2.5] {
            let s = format_value(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_value(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "experiment,family,n,t,b,seed,metric,value");
        assert_eq!(lines[1], "max_run,truly_random,1024,2048,,7,max_run_mean,1.0000000000000001e-1");
        assert_eq!(lines[2], "max_run,truly_random,1024,2048,8,7,bound,-1.6000000000000000e2");
    }

    #[test]
    fn json_mirrors_csv_values() {
        let mut buf = Vec::new();
        sample().write_json(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"value\": 1.0000000000000001e-1"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rows"][0]["value"].as_f64(), Some(0.1));
        assert_eq!(v["rows"][0]["b"], serde_json::Value::Null);
        assert_eq!(v["rows"][1]["b"], 8);
        assert_eq!(v["experiment"], "max_run");
    }
}
