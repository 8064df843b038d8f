//! Scenario-driven front end for the cone-chart constructions: reads a
//! JSON scenario, runs its commands, writes reports and CSV samples.

pub mod report;
pub mod run;
pub mod samples;
pub mod scenario;

use std::path::Path;

use thiserror::Error;

pub use report::RunReport;
pub use run::{CommandFailed, Runner};
pub use samples::{emit_samples, SampleRow};
pub use scenario::{Scenario, ScenarioError};

/// Scenarios shipped with the binary, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("f0_lemma1", include_str!("../scenarios/f0_lemma1.json")),
    ("f1_alternate", include_str!("../scenarios/f1_alternate.json")),
    ("f2_planar", include_str!("../scenarios/f2_planar.json")),
    ("square_reroute", include_str!("../scenarios/square_reroute.json")),
    (
        "suspension_corollary1",
        include_str!("../scenarios/suspension_corollary1.json"),
    ),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("setting up the scenario: {0:#}")]
    Setup(anyhow::Error),
    #[error(transparent)]
    Command(#[from] CommandFailed),
}

/// Parses and runs a scenario, writing CSV files under `out`.
pub fn run_scenario(text: &str, seed: u64, out: &Path) -> Result<RunReport, RunError> {
    let s = Scenario::parse(text)?;
    let mut runner = Runner::new(&s, seed, out).map_err(RunError::Setup)?;
    Ok(runner.run(&s)?)
}
