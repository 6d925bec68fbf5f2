//! Scenario runner for the mixing lab: configs, reports and the twelve scenarios.

pub mod config;
pub mod report;
pub mod scenarios;

pub use config::{ExperimentConfig, SCENARIOS};
pub use report::{export_report, verify, write_report, Certificate, Format, Report, Table, Verdict, Verification};
pub use scenarios::run_experiment;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid config: {0}")]
    Schema(String),
    #[error("guard {guard}: requested {requested}, limit {limit}")]
    Guard {
        guard: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] mixlab_core::Error),
}
