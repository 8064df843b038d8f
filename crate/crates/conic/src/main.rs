use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

/// Runs a scenario file and reports whether every verification passed.
#[derive(Parser)]
#[command(name = "conic", version)]
struct Args {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long)]
    scenario: String,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for CSV samples and `report.txt` / `report.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// List every check, not only failures.
    #[arg(long)]
    verbose: bool,
}

fn scenario_text(arg: &str) -> Result<String> {
    let path = PathBuf::from(arg);
    if !path.exists() {
        if let Some(text) = conic::bundled(arg) {
            return Ok(text.to_string());
        }
    }
    fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let text = match scenario_text(&args.scenario) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = match conic::run_scenario(&text, args.seed, &out) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_text(args.verbose);
    print!("{text}");
    if let Some(dir) = &args.out {
        let written = fs::create_dir_all(dir)
            .and_then(|()| fs::write(dir.join("report.txt"), report.to_text(true)))
            .and_then(|()| fs::write(dir.join("report.json"), report.to_json()));
        if let Err(e) = written {
            eprintln!("error: writing reports to {}: {e}", dir.display());
            return ExitCode::from(2);
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
