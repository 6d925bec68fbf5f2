//! Reports, their JSON/CSV export and re-verification.

use std::path::Path;

use serde::{Deserialize, Serialize};

use mixlab_core::group::KernelReport;
use mixlab_core::largeness::LargenessCert;
use mixlab_core::ramsey::{HomogeneousCert, RLimitEstimate};

use crate::config::ExperimentConfig;
use crate::LabError;

/// A table of exact values, every cell already rendered as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A certificate produced by a core module, labelled by its role in the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    Largeness { label: String, cert: LargenessCert },
    Homogeneous { label: String, cert: HomogeneousCert },
    Rlimit { label: String, cert: RLimitEstimate },
    Kernel { label: String, report: KernelReport },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub line: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub inputs: serde_json::Value,
    pub tables: Vec<Table>,
    pub certificates: Vec<Certificate>,
    pub verdict: Verdict,
    pub wall_time_us: u64,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Equality ignoring the wall time.
    pub fn same_content(&self, other: &Report) -> bool {
        self.scenario == other.scenario
            && self.inputs == other.inputs
            && self.tables == other.tables
            && self.certificates == other.certificates
            && self.verdict == other.verdict
    }

    pub fn config(&self) -> Result<ExperimentConfig, LabError> {
        let value = serde_json::json!({ "scenario": self.scenario, "params": self.inputs });
        ExperimentConfig::from_json(&value.to_string())
    }

    pub fn from_json(text: &str) -> Result<Self, LabError> {
        serde_json::from_str(text).map_err(|e| LabError::Schema(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Serializes a report: the full report as pretty JSON, or its first table as CSV.
pub fn export_report(rep: &Report, format: Format) -> Result<Vec<u8>, LabError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rep).map_err(|e| LabError::Schema(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            if let Some(t) = rep.tables.first() {
                w.write_record(&t.columns).map_err(csv_err)?;
                for row in &t.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
            }
            w.into_inner().map_err(|e| LabError::Schema(e.to_string()))
        }
    }
}

fn csv_err(e: csv::Error) -> LabError {
    LabError::Schema(e.to_string())
}

pub fn write_report(rep: &Report, format: Format, path: &Path) -> Result<(), LabError> {
    let bytes = export_report(rep, format)?;
    std::fs::write(path, bytes).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Outcome of re-running a report's inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub reproduced: bool,
    pub rerun: Report,
}

/// Re-runs the scenario from the echoed inputs and compares everything except wall time.
pub fn verify(rep: &Report) -> Result<Verification, LabError> {
    let rerun = crate::scenarios::run_experiment(&rep.config()?)?;
    Ok(Verification {
        reproduced: rerun.same_content(rep),
        rerun,
    })
}
