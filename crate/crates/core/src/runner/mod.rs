//! Experiment orchestration: configuration, the six named experiments, run
//! persistence (run.json + CSV tables + plot data), and report aggregation.
//!
//! Determinism contract: identical (config, seed, code version) reproduce
//! byte-identical CSV outputs at any thread count. Numeric CSV cells use
//! Rust's shortest round-trip `Display` for f64.

pub mod config;
pub mod experiments;
pub mod report;
pub mod rng;

pub use config::{build_initial_data, ExperimentConfig, ExperimentKind, InitialDataSpec};
pub use report::{report, ReportSummary};

use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const RUN_FORMAT_VERSION: u32 = 1;

/// One named check with its measured value and threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    /// `<=` or `>=`: which side of the threshold passes
    pub direction: String,
}

impl CheckResult {
    pub fn le(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.into(),
            passed: value <= threshold,
            value,
            threshold,
            direction: "<=".to_string(),
        }
    }

    pub fn ge(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.into(),
            passed: value >= threshold,
            value,
            threshold,
            direction: ">=".to_string(),
        }
    }
}

/// Persisted record of one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub format_version: u32,
    pub experiment: String,
    pub code_version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    /// wall-clock seconds; the only non-reproducible field
    pub timing_seconds: f64,
    pub checks: Vec<CheckResult>,
    pub fitted_constants: BTreeMap<String, f64>,
    pub artifacts: Vec<String>,
    pub passed: bool,
}

impl RunRecord {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Mutable state each experiment fills in.
pub struct RunOutput {
    pub checks: Vec<CheckResult>,
    pub fitted_constants: BTreeMap<String, f64>,
    pub artifacts: Vec<String>,
    out_dir: PathBuf,
}

impl RunOutput {
    fn new(out_dir: PathBuf) -> Self {
        RunOutput {
            checks: Vec::new(),
            fitted_constants: BTreeMap::new(),
            artifacts: Vec::new(),
            out_dir,
        }
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    pub fn check(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn constant(&mut self, name: impl Into<String>, value: f64) {
        self.fitted_constants.insert(name.into(), value);
    }

    /// Write a CSV table (header + rows of Display cells) into the run dir.
    pub fn write_csv(&mut self, name: &str, header: &str, rows: &[Vec<CsvCell>]) -> Result<()> {
        let path = self.out_dir.join(name);
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(file, "{header}")?;
        for row in rows {
            let mut first = true;
            for cell in row {
                if !first {
                    write!(file, ",")?;
                }
                write!(file, "{cell}")?;
                first = false;
            }
            writeln!(file)?;
        }
        file.flush()?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(value)?)?;
        self.artifacts.push(name.to_string());
        Ok(())
    }
}

/// One CSV cell; floats print in shortest round-trip form.
#[derive(Debug, Clone)]
pub enum CsvCell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Display for CsvCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CsvCell::Int(v) => write!(f, "{v}"),
            CsvCell::Float(v) => write!(f, "{v}"),
            CsvCell::Text(v) => write!(f, "{v}"),
        }
    }
}

impl From<f64> for CsvCell {
    fn from(v: f64) -> Self {
        CsvCell::Float(v)
    }
}

impl From<i64> for CsvCell {
    fn from(v: i64) -> Self {
        CsvCell::Int(v)
    }
}

impl From<i32> for CsvCell {
    fn from(v: i32) -> Self {
        CsvCell::Int(v as i64)
    }
}

impl From<&str> for CsvCell {
    fn from(v: &str) -> Self {
        CsvCell::Text(v.to_string())
    }
}

/// Execute the experiment named in the config; returns the record after
/// writing run.json and all artifacts into the output directory.
pub fn run(config: &ExperimentConfig) -> Result<RunRecord> {
    config.validate()?;
    std::fs::create_dir_all(&config.output_dir)?;
    let started = std::time::Instant::now();
    let mut output = RunOutput::new(config.output_dir.clone());
    match config.experiment {
        ExperimentKind::Propagate => experiments::propagate(config, &mut output)?,
        ExperimentKind::StrichartzScan => experiments::strichartz_scan(config, &mut output)?,
        ExperimentKind::VerifyBessel => experiments::verify_bessel(config, &mut output)?,
        ExperimentKind::VerifyHankel => experiments::verify_hankel(config, &mut output)?,
        ExperimentKind::VerifyKernels => experiments::verify_kernels(config, &mut output)?,
        ExperimentKind::VerifyMaximal => experiments::verify_maximal(config, &mut output)?,
    }
    let passed = output.checks.iter().all(|c| c.passed);
    let record = RunRecord {
        format_version: RUN_FORMAT_VERSION,
        experiment: config.experiment.name().to_string(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        config: config.clone(),
        timing_seconds: started.elapsed().as_secs_f64(),
        checks: output.checks.clone(),
        fitted_constants: output.fitted_constants.clone(),
        artifacts: output.artifacts.clone(),
        passed,
    };
    std::fs::write(
        config.output_dir.join("run.json"),
        serde_json::to_string_pretty(&record)?,
    )?;
    Ok(record)
}
