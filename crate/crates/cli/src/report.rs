//! Verification reports: gated checks, JSON persistence with an archive of
//! every run, and consolidation of the latest run of each experiment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How a check's outcome feeds the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gate {
    /// Identity that survives truncation; compared against a tolerance.
    Exact,
    /// Identity compared only where truncation cannot reach.
    InteriorSubspace,
    /// Trend across cutoffs towards the untruncated value.
    Convergence,
    /// Measured and recorded; never fails a run.
    Probe,
}

impl Gate {
    pub fn as_str(self) -> &'static str {
        match self {
            Gate::Exact => "exact",
            Gate::InteriorSubspace => "interior-subspace",
            Gate::Convergence => "convergence",
            Gate::Probe => "probe",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub paper_ref: String,
    pub gate: Gate,
    pub max_abs_error: f64,
    /// `None` for probes and for checks that could not be evaluated.
    pub pass: Option<bool>,
    /// Measured values behind the check (series, tables, fitted data).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Keeps reports valid JSON: non-finite errors become the largest float.
fn finite(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX
    }
}

impl Check {
    fn new(name: impl Into<String>, paper_ref: &str, gate: Gate, err: f64, pass: Option<bool>) -> Self {
        Self { name: name.into(), paper_ref: paper_ref.to_string(), gate, max_abs_error: finite(err), pass, value: None, note: None }
    }

    pub fn exact(name: impl Into<String>, paper_ref: &str, err: f64, tol: f64) -> Self {
        Self::new(name, paper_ref, Gate::Exact, err, Some(err <= tol))
    }

    pub fn interior(name: impl Into<String>, paper_ref: &str, err: f64, tol: f64) -> Self {
        Self::new(name, paper_ref, Gate::InteriorSubspace, err, Some(err <= tol))
    }

    /// A trend check; `err` is the remaining distance at the largest cutoff.
    pub fn convergence(name: impl Into<String>, paper_ref: &str, err: f64, pass: Option<bool>) -> Self {
        Self::new(name, paper_ref, Gate::Convergence, err, pass)
    }

    /// A check whose pass/fail was decided by the caller.
    pub fn gated(name: impl Into<String>, paper_ref: &str, gate: Gate, err: f64, pass: bool) -> Self {
        Self::new(name, paper_ref, gate, err, Some(pass))
    }

    pub fn probe(name: impl Into<String>, paper_ref: &str, measured: f64) -> Self {
        Self::new(name, paper_ref, Gate::Probe, measured, None)
    }

    pub fn with_value(mut self, value: impl Serialize) -> Self {
        self.value = Some(serde_json::to_value(value).expect("check value serialises"));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Whether the check fails its gate (probes never do).
    pub fn failed(&self) -> bool {
        self.gate != Gate::Probe && self.pass == Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub experiment: String,
    pub paper_ref: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub runtime_seconds: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(experiment: &str, paper_ref: &str, config: serde_json::Value) -> Self {
        Self { experiment: experiment.into(), paper_ref: paper_ref.into(), config, checks: Vec::new(), runtime_seconds: 0.0, notes: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Writes `<dir>/<experiment>.json` and an archived copy
    /// `<dir>/archive/<experiment>.<n>.json`; returns the latest path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, ReportError> {
        let archive = dir.join(ARCHIVE_DIR);
        std::fs::create_dir_all(&archive).map_err(|e| ReportError::io(&archive, e))?;
        let text = serde_json::to_string_pretty(self).expect("report serialises");
        let mut n = 1;
        let archived = loop {
            let p = archive.join(format!("{}.{n}.json", self.experiment));
            if !p.exists() {
                break p;
            }
            n += 1;
        };
        std::fs::write(&archived, &text).map_err(|e| ReportError::io(&archived, e))?;
        let latest = dir.join(format!("{}.json", self.experiment));
        std::fs::write(&latest, &text).map_err(|e| ReportError::io(&latest, e))?;
        Ok(latest)
    }

    /// One line per check: status, gate, name, error.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{:<5} {:<17} {:<72} {:.3e}", status(c), c.gate.as_str(), c.name, c.max_abs_error);
        }
        out
    }
}

fn status(c: &Check) -> &'static str {
    match (c.gate, c.pass) {
        (Gate::Probe, _) | (_, None) => "info",
        (_, Some(true)) => "ok",
        (_, Some(false)) => "FAIL",
    }
}

pub const ARCHIVE_DIR: &str = "archive";
pub const CONSOLIDATED: &str = "consolidated.json";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("corrupt report files: {}", .0.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", "))]
    Corrupt(Vec<PathBuf>),
}

impl ReportError {
    fn io(path: &Path, e: std::io::Error) -> Self {
        ReportError::Io { path: path.to_path_buf(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ConsolidatedReport {
    /// Latest run of every experiment, keyed by experiment name.
    pub experiments: BTreeMap<String, VerificationReport>,
    /// Number of archived runs per experiment.
    pub archived_runs: BTreeMap<String, usize>,
}

impl ConsolidatedReport {
    pub fn passed(&self) -> bool {
        self.experiments.values().all(VerificationReport::passed)
    }

    /// Table of identity, reference, gate and status.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<14} {:<72} {:<28} {:<17} status", "experiment", "check", "reference", "gate");
        for (name, r) in &self.experiments {
            for c in &r.checks {
                let _ = writeln!(out, "{:<14} {:<72} {:<28} {:<17} {}", name, c.name, c.paper_ref, c.gate.as_str(), status(c));
            }
        }
        let failed: usize = self.experiments.values().map(|r| r.failures().count()).sum();
        let _ = writeln!(out, "{} experiments, {} failed gated checks", self.experiments.len(), failed);
        out
    }
}

/// Merges the latest report of every experiment in `dir` and writes
/// `consolidated.json`. An empty or missing directory gives an empty report.
pub fn consolidate(dir: &Path) -> Result<ConsolidatedReport, ReportError> {
    let mut out = ConsolidatedReport::default();
    if !dir.exists() {
        return Ok(out);
    }
    let mut corrupt = Vec::new();
    let mut paths: Vec<PathBuf> = read_json_files(dir)?.into_iter().filter(|p| p.file_name().is_some_and(|n| n != CONSOLIDATED)).collect();
    paths.sort();
    for path in paths {
        match std::fs::read_to_string(&path).ok().and_then(|t| serde_json::from_str::<VerificationReport>(&t).ok()) {
            Some(r) => {
                out.experiments.insert(r.experiment.clone(), r);
            }
            None => corrupt.push(path),
        }
    }
    let archive = dir.join(ARCHIVE_DIR);
    if archive.exists() {
        for path in read_json_files(&archive)? {
            match std::fs::read_to_string(&path).ok().and_then(|t| serde_json::from_str::<VerificationReport>(&t).ok()) {
                Some(r) => *out.archived_runs.entry(r.experiment).or_default() += 1,
                None => corrupt.push(path),
            }
        }
    }
    if !corrupt.is_empty() {
        return Err(ReportError::Corrupt(corrupt));
    }
    let target = dir.join(CONSOLIDATED);
    std::fs::write(&target, serde_json::to_string_pretty(&out).expect("report serialises")).map_err(|e| ReportError::io(&target, e))?;
    Ok(out)
}

fn read_json_files(dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    let entries = std::fs::read_dir(dir).map_err(|e| ReportError::io(dir, e))?;
    Ok(entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(name: &str, err: f64) -> VerificationReport {
        let mut r = VerificationReport::new(name, "ref", serde_json::json!({}));
        r.push(Check::exact("identity", "ref", err, 1e-10));
        r.push(Check::probe("measured", "ref", 3.0));
        r
    }

    #[test]
    fn gates_serialise_in_kebab_case() {
        let c = Check::interior("x", "ref", 0.0, 1.0);
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["gate"], "interior-subspace");
        assert_eq!(v["pass"], true);
        assert_eq!(serde_json::to_value(Check::probe("p", "r", 1.0)).unwrap()["pass"], serde_json::Value::Null);
    }

    #[test]
    fn probes_never_fail() {
        let mut r = report("a", 0.0);
        r.push(Check::probe("huge", "ref", 1e9));
        assert!(r.passed());
        r.push(Check::exact("broken", "ref", 1.0, 1e-10));
        assert!(!r.passed());
    }

    #[test]
    fn non_finite_errors_stay_valid_json() {
        let c = Check::exact("nan", "ref", f64::NAN, 1.0);
        assert_eq!(c.pass, Some(false));
        let text = serde_json::to_string(&c).unwrap();
        let back: Check = serde_json::from_str(&text).unwrap();
        assert_eq!(back.max_abs_error, f64::MAX);
    }
}
