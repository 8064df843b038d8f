//! Text and JSON forms of a scenario run.

use std::fmt::Write as _;

use conic_core::verify::{Check, VerificationReport};
use serde::Serialize;

/// The outcome of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub index: usize,
    pub op: &'static str,
    /// What the command built or wrote, one line each.
    pub notes: Vec<String>,
    pub reports: Vec<ReportJson>,
}

impl Step {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub passed: bool,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub subject: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub informational: bool,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleJson {
    pub points: Vec<String>,
    pub detail: String,
}

impl From<&Check> for CheckJson {
    fn from(c: &Check) -> Self {
        CheckJson {
            name: c.name.clone(),
            passed: c.passed,
            informational: c.informational,
            samples: c.samples,
            counterexample: c.counterexample.as_ref().map(|x| CounterexampleJson {
                points: x.points.iter().map(ToString::to_string).collect(),
                detail: x.detail.clone(),
            }),
        }
    }
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        ReportJson {
            subject: r.subject.clone(),
            seed: r.seed,
            passed: r.passed(),
            checks: r.checks.iter().map(CheckJson::from).collect(),
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl RunReport {
    pub fn new(scenario: String, seed: u64, steps: Vec<Step>) -> Self {
        RunReport {
            scenario,
            seed,
            passed: steps.iter().all(Step::passed),
            steps,
        }
    }

    /// One line per step and per report; check lines for failures, or for
    /// every check when `verbose`.
    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} seed {}", self.scenario, self.seed);
        for step in &self.steps {
            let _ = writeln!(out, "[{}] {} {}", step.index, step.op, verdict(step.passed()));
            for n in &step.notes {
                let _ = writeln!(out, "    {n}");
            }
            for r in &step.reports {
                let _ = writeln!(
                    out,
                    "  {} {} ({} checks)",
                    verdict(r.passed),
                    r.subject,
                    r.checks.len()
                );
                for c in &r.checks {
                    let shown = verbose || (!c.passed && !c.informational);
                    if !shown {
                        continue;
                    }
                    let tag = match (c.passed, c.informational) {
                        (true, _) => "ok",
                        (false, true) => "info",
                        (false, false) => "FAIL",
                    };
                    let _ = write!(out, "    {tag} {} [{} samples]", c.name, c.samples);
                    if let Some(x) = &c.counterexample {
                        let _ = write!(out, ": {} at {}", x.detail, x.points.join(", "));
                    }
                    out.push('\n');
                }
            }
        }
        let _ = writeln!(out, "{}", verdict(self.passed));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
