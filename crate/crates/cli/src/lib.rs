//! Batch experiment runner for the `boxlasso` library: reads a flat TOML
//! experiment description, evaluates theory and Monte-Carlo curves, and
//! writes a CSV table plus a JSON summary.

pub mod error;
pub mod experiments;
pub mod spec;
pub mod table;
pub mod tolerance;
pub mod validate;

use std::path::PathBuf;

pub use error::CliError;
pub use spec::{Experiment, ExperimentSpec, Overrides};

pub struct RunOutput {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub checks_passed: bool,
}

/// Runs one experiment and writes `<out>/<experiment>.csv` and
/// `<out>/<experiment>.summary.json`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    std::fs::create_dir_all(&spec.out).map_err(|e| CliError::io(format!("creating {}", spec.out.display()), e))?;
    let output = experiments::run(spec)?;
    let name = spec.experiment.name();
    let csv = spec.out.join(format!("{name}.csv"));
    let summary = spec.out.join(format!("{name}.summary.json"));
    output.table.write_csv(&csv)?;
    let mut text = serde_json::to_string_pretty(&output.summary).expect("summary serializes");
    text.push('\n');
    std::fs::write(&summary, text).map_err(|e| CliError::io(format!("writing {}", summary.display()), e))?;
    Ok(RunOutput {
        csv,
        summary,
        checks_passed: output.summary["checks_passed"] == serde_json::json!(true),
    })
}
