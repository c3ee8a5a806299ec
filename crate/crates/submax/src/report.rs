//! Run reports and their JSON / CSV encodings.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{io_error, Result, SubmaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = SubmaxError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(SubmaxError::InvalidConfig(format!(
                "unknown format `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// The guarantee a run is checked against, instantiated for its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Formula with the run's parameters substituted, e.g. `OPT/(4+α), α=1`.
    pub formula: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub label: String,
    pub set: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub value: f64,
    pub selected: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub instance: String,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub fmv: String,
    pub alpha: f64,
    pub mean: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
    pub opt: Option<f64>,
    pub opt_set: Option<Vec<usize>>,
    /// `mean / opt` when the optimum is known and positive.
    pub ratio: Option<f64>,
    pub bound: Option<BoundReport>,
    /// `mean >= bound - 3·stderr` (up to tolerance); absent when no bound is asserted.
    pub pass: Option<bool>,
    /// Value-oracle evaluations made by the algorithm over all trials.
    pub query_count: u64,
    /// Offline candidates of trial 0.
    pub candidates: Vec<CandidateReport>,
    pub trial_values: Vec<TrialRecord>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    algorithm: &'a str,
    instance: &'a str,
    seed: u64,
    trial: u64,
    value: f64,
    selected: String,
    opt: Option<f64>,
    bound: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per trial.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for t in &self.trial_values {
            writer.serialize(CsvRow {
                algorithm: &self.algorithm,
                instance: &self.instance,
                seed: self.seed,
                trial: t.trial,
                value: t.value,
                selected: t
                    .selected
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
                opt: self.opt,
                bound: self.bound.as_ref().map(|b| b.value),
            })?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| SubmaxError::InvalidConfig(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json().map(|s| s + "\n"),
            Format::Csv => self.to_csv(),
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let opt = self.opt.map_or("?".to_string(), |v| format!("{v}"));
        let bound = self.bound.as_ref().map_or("none".to_string(), |b| {
            format!("{} = {:.6}", b.formula, b.value)
        });
        let verdict = match self.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "n/a",
        };
        format!(
            "{} on {}: mean {:.6} ± {:.6} over {} trial(s), OPT {opt}, bound {bound}: {verdict}",
            self.algorithm, self.instance, self.mean, self.stderr, self.trials
        )
    }
}

/// Writes `report` to `path` in `format`.
pub fn emit_report(report: &RunReport, format: Format, path: &Path) -> Result<()> {
    let text = report.render(format)?;
    let mut file = fs::File::create(path).map_err(io_error(path))?;
    file.write_all(text.as_bytes()).map_err(io_error(path))
}
