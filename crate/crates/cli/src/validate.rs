//! Theory-vs-simulation comparison of experiment CSVs.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::CliError;
use crate::experiments::known_columns;
use crate::table::NumericCsv;
use crate::tolerance::Tolerance;

/// Tolerances applied when the caller names none.
pub fn default_tolerances() -> Vec<(String, Tolerance)> {
    [
        ("mse", "rel:0.05"),
        ("residual", "rel:0.05"),
        ("objective", "rel:0.05"),
        ("psi_on", "abs:0.02"),
        ("psi_off", "abs:0.02"),
        ("eer", "rel:0.1:0.01"),
        ("goodput", "rel:0.1"),
    ]
    .into_iter()
    .map(|(m, t)| (m.to_string(), t.parse().expect("default tolerances parse")))
    .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    /// One-based data row.
    pub row: usize,
    pub sweep_value: f64,
    pub theory: f64,
    pub measured: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricCheck {
    pub metric: String,
    pub tolerance: Tolerance,
    pub checked: usize,
    /// Rows over tolerance, worst first.
    pub failures: Vec<RowError>,
    pub worst: Option<RowError>,
}

impl MetricCheck {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "metric": self.metric,
            "tolerance": self.tolerance.to_string(),
            "checked_rows": self.checked,
            "max_error": self.worst.as_ref().map(|w| w.error),
            "worst_row": self.worst.as_ref().map(|w| w.row),
            "failed_rows": self.failures.iter().map(|f| f.row).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }
}

/// Compares `measured` against `theory` row by row.
pub fn check_metric(metric: &str, tolerance: Tolerance, sweep: &[f64], theory: &[f64], measured: &[f64]) -> MetricCheck {
    let mut errors: Vec<RowError> = (0..sweep.len())
        .filter_map(|i| {
            tolerance.error(theory[i], measured[i]).map(|error| RowError {
                row: i + 1,
                sweep_value: sweep[i],
                theory: theory[i],
                measured: measured[i],
                error,
            })
        })
        .collect();
    let checked = errors.len();
    errors.sort_by(|a, b| b.error.total_cmp(&a.error).then(a.row.cmp(&b.row)));
    let worst = errors.first().cloned();
    errors.retain(|e| !(e.error <= tolerance.bound));
    MetricCheck {
        metric: metric.to_string(),
        tolerance,
        checked,
        failures: errors,
        worst,
    }
}

#[derive(Debug, Clone)]
pub struct FileReport {
    pub path: PathBuf,
    pub sweep_variable: String,
    pub checks: Vec<MetricCheck>,
}

impl FileReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(MetricCheck::pass)
    }
}

const WORST_ROWS_SHOWN: usize = 5;

/// Human-readable report, one line per check plus the worst failing rows.
pub fn render(reports: &[FileReport]) -> String {
    let mut out = String::new();
    for r in reports {
        for c in &r.checks {
            let status = if c.pass() { "PASS" } else { "FAIL" };
            let worst = match &c.worst {
                Some(w) => format!("max error {:.3e} at row {} ({}={:.6e})", w.error, w.row, r.sweep_variable, w.sweep_value),
                None => "no rows checked".to_string(),
            };
            out.push_str(&format!(
                "{status} {} {} [{}]: {} rows, {worst}\n",
                r.path.display(),
                c.metric,
                c.tolerance,
                c.checked
            ));
            for f in c.failures.iter().take(WORST_ROWS_SHOWN) {
                out.push_str(&format!(
                    "  row {} ({}={:.6e}): theory {:.6e}, mc {:.6e}, error {:.3e}\n",
                    f.row, r.sweep_variable, f.sweep_value, f.theory, f.measured, f.error
                ));
            }
        }
    }
    out
}

/// Checks every requested metric of one CSV. With no explicit tolerances,
/// every metric that has both a `_theory` and an `_mc` column is checked
/// at its default tolerance.
pub fn validate_file(path: &Path, tolerances: &[(String, Tolerance)]) -> Result<FileReport, CliError> {
    let csv = NumericCsv::read(path)?;
    let known: BTreeSet<String> = known_columns();
    if let Some(bad) = csv.columns.iter().find(|c| !known.contains(*c)) {
        return Err(CliError::Schema(format!("{}: unknown column `{bad}`", path.display())));
    }
    let sweep_variable = match csv.columns.first().map(String::as_str) {
        Some(v @ ("gamma" | "nu" | "tau_t")) => v.to_string(),
        _ => {
            return Err(CliError::Schema(format!(
                "{}: first column must be gamma, nu or tau_t",
                path.display()
            )))
        }
    };
    let explicit = !tolerances.is_empty();
    let requested = if explicit { tolerances.to_vec() } else { default_tolerances() };
    let column = |name: &str| csv.index(name).map(|j| csv.rows.iter().map(|r| r[j]).collect::<Vec<f64>>());
    let sweep = column(&sweep_variable).expect("sweep column exists");

    let mut checks = Vec::new();
    for (metric, tol) in requested {
        let (theory, measured) = match (column(&format!("{metric}_theory")), column(&format!("{metric}_mc"))) {
            (Some(t), Some(m)) => (t, m),
            _ if explicit => {
                return Err(CliError::Schema(format!(
                    "{}: no `{metric}_theory`/`{metric}_mc` column pair",
                    path.display()
                )))
            }
            _ => continue,
        };
        if !measured.is_empty() && measured.iter().all(|x| x.is_nan()) {
            if explicit {
                return Err(CliError::Schema(format!(
                    "{}: `{metric}_mc` was not computed (run with trials > 0)",
                    path.display()
                )));
            }
            continue;
        }
        checks.push(check_metric(&metric, tol, &sweep, &theory, &measured));
    }
    if checks.is_empty() {
        return Err(CliError::Schema(format!("{}: no theory/mc column pairs to compare", path.display())));
    }
    Ok(FileReport {
        path: path.to_path_buf(),
        sweep_variable,
        checks,
    })
}

pub fn validate_files(paths: &[PathBuf], tolerances: &[(String, Tolerance)]) -> Result<Vec<FileReport>, CliError> {
    paths.iter().map(|p| validate_file(p, tolerances)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_only_rows_over_tolerance() {
        let tol: Tolerance = "rel:0.05".parse().unwrap();
        let c = check_metric("mse", tol, &[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0], &[1.01, 1.5, 0.97]);
        assert_eq!(c.checked, 3);
        assert_eq!(c.failures.len(), 1);
        assert_eq!(c.failures[0].row, 2);
        assert_eq!(c.worst.unwrap().row, 2);
    }

    #[test]
    fn zero_tolerance_on_identical_values() {
        let tol: Tolerance = "rel:0".parse().unwrap();
        let v = [0.0, 0.25, 1e-300];
        assert!(check_metric("mse", tol, &[1.0, 2.0, 3.0], &v, &v).pass());
    }

    #[test]
    fn nan_measurement_fails() {
        let tol: Tolerance = "abs:1".parse().unwrap();
        assert!(!check_metric("mse", tol, &[1.0], &[1.0], &[f64::NAN]).pass());
    }
}
