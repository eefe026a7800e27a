use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Outcome of one numerical check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, String>,
    pub measured_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: f64,
    /// The check asserts that an error IS raised (threshold configurations).
    #[serde(default)]
    pub expected_failure: bool,
    /// Free-form detail: the raised error, fitted values, ...
    #[serde(default)]
    pub note: String,
}

impl VerificationReport {
    /// `passed` is `measured_error <= tolerance` (false for NaN).
    pub fn new(check_name: impl Into<String>, measured_error: f64, tolerance: f64) -> Self {
        Self {
            check_name: check_name.into(),
            parameters: BTreeMap::new(),
            measured_error,
            tolerance,
            passed: measured_error <= tolerance,
            runtime_ms: 0.0,
            expected_failure: false,
            note: String::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Sort key used to merge parallel results deterministically.
    pub fn sort_key(&self) -> (String, String) {
        let params = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        (self.check_name.clone(), params)
    }
}

/// Run `check`, attach the elapsed time, and turn an error into a failed
/// report (measured error `inf`) named `name`.
pub fn timed<F>(name: &str, params: &[(&str, String)], tolerance: f64, check: F) -> VerificationReport
where
    F: FnOnce() -> Result<VerificationReport>,
{
    let start = Instant::now();
    let mut report = match check() {
        Ok(r) => r,
        Err(e) => VerificationReport::new(name, f64::INFINITY, tolerance).note(e.to_string()),
    };
    for (k, v) in params {
        report.parameters.entry(k.to_string()).or_insert_with(|| v.clone());
    }
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

/// Human-readable table, one row per report.
pub fn summary_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    let width = reports.iter().map(|r| r.check_name.len()).max().unwrap_or(5).max(5);
    let _ = writeln!(
        out,
        "{:<width$}  {:<6}  {:>12}  {:>10}  {:>9}  parameters",
        "check", "status", "error", "tolerance", "ms"
    );
    for r in reports {
        let status = match (r.passed, r.expected_failure) {
            (true, false) => "ok",
            (true, true) => "xfail",
            (false, _) => "FAIL",
        };
        let params = r.sort_key().1;
        let _ = writeln!(
            out,
            "{:<width$}  {:<6}  {:>12.3e}  {:>10.1e}  {:>9.1}  {}",
            r.check_name, status, r.measured_error, r.tolerance, r.runtime_ms, params
        );
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", reports.len(), failed);
    out
}
