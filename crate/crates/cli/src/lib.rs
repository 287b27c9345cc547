//! Scenario runner: loads a scenario file, builds the algebra, modules and fields, runs the
//! selected checks and writes one JSON report per check plus a summary.

pub mod config;
pub mod runner;

pub use config::{ScenarioConfig, BUNDLED, CHECKS, SCHEMA};
pub use runner::{build, dump, run_check, run_scenario, DumpKind, RunSummary, Workbench};

/// Error with a machine-readable kind.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind}: {message}")]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn validation(m: impl Into<String>) -> Self {
        CliError { kind: "validation", message: m.into() }
    }

    pub fn io(m: impl Into<String>) -> Self {
        CliError { kind: "io", message: m.into() }
    }

    pub fn check(m: impl Into<String>) -> Self {
        CliError { kind: "check", message: m.into() }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind, "message": self.message }).to_string()
    }
}
