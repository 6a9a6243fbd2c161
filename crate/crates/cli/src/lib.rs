//! Command-line front end for the experiment harness.
//!
//! Exit codes: 0 success, 1 an assertion failed, 2 usage error, 3 I/O or
//! configuration error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use linprobe::harness::{run_experiment, Experiment, ExperimentConfig, HarnessError, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "linprobe", version, about = "Run linear-probing experiments")]
pub struct Args {
    /// Experiment to run (see --list). Falls back to the config's `experiment`.
    #[arg(long)]
    pub experiment: Option<String>,
    /// JSON config; unknown keys are rejected.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Root seed. Falls back to the config's `seed`, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file, `-` for stdout. Falls back to the config's `output`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    pub threads: Option<usize>,
    /// List experiments and exit.
    #[arg(long)]
    pub list: bool,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::UnknownExperiment(_) => Failure::Usage(e.to_string()),
            other => Failure::Io(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs, and returns the exit
/// code. Reports go to `stdout`, diagnostics to `stderr`.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match run(&args, stdout, stderr) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_IO
        }
    }
}

fn run(args: &Args, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    if args.list {
        for e in Experiment::ALL {
            writeln!(stdout, "{:<24}{}", e.name(), e.description())?;
        }
        return Ok(EXIT_OK);
    }
    let config = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => ExperimentConfig::default(),
    };
    let experiment = match (&args.experiment, config.experiment) {
        (Some(name), _) => name.parse::<Experiment>()?,
        (None, Some(e)) => e,
        (None, None) => return Err(Failure::Usage("--experiment is required (see --list)".into())),
    };
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let report = match args.threads {
        Some(0) => return Err(Failure::Usage("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Io(e.to_string()))?
            .install(|| run_experiment(experiment, &config, seed))?,
        None => run_experiment(experiment, &config, seed)?,
    };
    match args.out.as_ref().or(config.output.as_ref()) {
        Some(path) if path.as_os_str() != "-" => {
            let file = File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_report(&report, args.format, &mut w)?;
            w.flush()?;
        }
        _ => write_report(&report, args.format, stdout)?,
    }
    for a in &report.assertions {
        writeln!(stderr, "{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail)?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_ASSERTION })
}

fn write_report(report: &Report, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Csv => report.write_csv(out)?,
        Format::Json => report.write_json(out)?,
    }
    Ok(())
}
