//! Report rows, verdicts and their serialisation.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported value without a bound.
    Info,
}

/// `pass` iff `lower ≤ value ≤ upper` (missing bounds are open); `info` when
/// neither bound is set. NaN never passes.
pub fn judge(value: f64, lower: Option<f64>, upper: Option<f64>) -> Verdict {
    if lower.is_none() && upper.is_none() {
        return Verdict::Info;
    }
    let ok = !value.is_nan() && lower.is_none_or(|l| value >= l) && upper.is_none_or(|u| value <= u);
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// One line of `rows.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub config_hash: String,
    pub experiment: String,
    pub case: String,
    pub metric: String,
    /// Invariant or acceptance criterion the bound comes from; empty for info.
    pub invariant: String,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub case: String,
    pub grid: usize,
    pub method: String,
    pub cycles: usize,
    pub max_residual: f64,
    pub fiber_nodes: usize,
    pub fiber_converged: bool,
    /// `λ_max / λ₁` of the discrete problem.
    pub condition: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config_hash: String,
    pub echo: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    pub diagnostics: Vec<Diagnostics>,
    /// Failures that replaced a row instead of aborting the run.
    pub errors: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub seconds: f64,
}

/// Collects rows for one experiment.
#[derive(Debug)]
pub struct RowSink {
    hash: String,
    experiment: String,
    pub rows: Vec<Row>,
    pub diagnostics: Vec<Diagnostics>,
    pub errors: Vec<String>,
}

impl RowSink {
    pub fn new(hash: &str, experiment: &str) -> Self {
        RowSink {
            hash: hash.to_string(),
            experiment: experiment.to_string(),
            rows: Vec::new(),
            diagnostics: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn info(&mut self, case: &str, metric: &str, value: f64) {
        self.push(case, metric, "", value, None, None);
    }

    pub fn check(&mut self, case: &str, metric: &str, invariant: &str, value: f64, lower: Option<f64>, upper: Option<f64>) {
        self.push(case, metric, invariant, value, lower, upper);
    }

    /// `|value − target| ≤ tol`, stored as `|value − target|` against `[0, tol]`.
    pub fn close(&mut self, case: &str, metric: &str, invariant: &str, deviation: f64, tol: f64) {
        self.push(case, metric, invariant, deviation, Some(0.0), Some(tol));
    }

    pub fn error(&mut self, case: &str, invariant: &str, err: &dyn std::fmt::Display) {
        self.errors.push(format!("{case}: {err}"));
        self.push(case, "error", invariant, f64::NAN, Some(0.0), Some(0.0));
    }

    fn push(&mut self, case: &str, metric: &str, invariant: &str, value: f64, lower: Option<f64>, upper: Option<f64>) {
        self.rows.push(Row {
            config_hash: self.hash.clone(),
            experiment: self.experiment.clone(),
            case: case.to_string(),
            metric: metric.to_string(),
            invariant: invariant.to_string(),
            value,
            lower,
            upper,
            verdict: judge(value, lower, upper),
        });
    }

    pub fn finish(self, echo: BTreeMap<String, String>, seconds: f64) -> ExperimentReport {
        let passed = self.rows.iter().filter(|r| r.verdict == Verdict::Pass).count();
        let failed = self.rows.iter().filter(|r| r.verdict == Verdict::Fail).count();
        ExperimentReport {
            experiment: self.experiment,
            config_hash: self.hash,
            echo,
            rows: self.rows,
            diagnostics: self.diagnostics,
            errors: self.errors,
            passed,
            failed,
            seconds,
        }
    }
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        serde_json::to_writer_pretty(f, self)?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Short human-readable summary.
    pub fn summary(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "{} [{}]", self.experiment, self.config_hash)?;
        for r in self.rows.iter().filter(|r| r.verdict != Verdict::Info) {
            let tag = if r.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "  {tag} {:<28} {:<32} {:>14.6e}  [{}, {}]",
                r.case,
                r.metric,
                r.value,
                r.lower.map_or("-inf".into(), |v| format!("{v:.6e}")),
                r.upper.map_or("+inf".into(), |v| format!("{v:.6e}")),
            )?;
        }
        for e in &self.errors {
            writeln!(out, "  error: {e}")?;
        }
        writeln!(out, "{} passed, {} failed in {:.2}s", self.passed, self.failed, self.seconds)
    }
}

/// Read `rows.csv` back.
pub fn read_rows(path: &Path) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

/// Rows whose stored verdict differs from the one implied by their bounds.
pub fn verdict_mismatches(rows: &[Row]) -> Vec<&Row> {
    rows.iter().filter(|r| judge(r.value, r.lower, r.upper) != r.verdict).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn judging() {
        assert_eq!(judge(1.0, None, None), Verdict::Info);
        assert_eq!(judge(1.0, Some(0.0), None), Verdict::Pass);
        assert_eq!(judge(1.0, Some(0.0), Some(0.5)), Verdict::Fail);
        assert_eq!(judge(f64::NAN, Some(0.0), None), Verdict::Fail);
        assert_eq!(judge(0.5, None, Some(0.5)), Verdict::Pass);
    }

    #[test]
    fn csv_round_trip_keeps_verdicts() {
        let mut sink = RowSink::new("abc", "convergence");
        sink.info("a", "lambda1", std::f64::consts::PI);
        sink.check("a", "order", "convergence-order", 1.999_999_999_999_7, Some(1.6), Some(2.4));
        sink.close("b", "mu", "volume", 3e-9, 1e-8);
        sink.error("c", "solve", &"boom");
        let report = sink.finish(BTreeMap::new(), 0.0);
        assert_eq!((report.passed, report.failed), (2, 1));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        report.write_csv(&path).unwrap();
        let back = read_rows(&path).unwrap();
        assert_eq!(back.len(), 4);
        assert_eq!(back[0].value, std::f64::consts::PI);
        assert_eq!(back[1].value, 1.999_999_999_999_7);
        assert!(back[3].value.is_nan());
        assert!(verdict_mismatches(&back).is_empty());
    }
}
