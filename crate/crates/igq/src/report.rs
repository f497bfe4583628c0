//! Check reports: one JSON object per check, then a summary object.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

pub type Details = BTreeMap<String, Value>;

/// Result of one check. `status == Pass` exactly when `max_residual` is
/// finite and strictly below `tolerance`. A residual that is not finite is
/// written as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub trials: u64,
    pub seed: u64,
    /// Wall-clock seconds. Not covered by the determinism guarantee.
    pub elapsed: f64,
    pub details: Details,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// What a check body measured.
#[derive(Debug, Clone, Default)]
pub struct Measured {
    pub residual: f64,
    pub details: Details,
}

impl Measured {
    pub fn new(residual: f64) -> Self {
        Self { residual, details: Details::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }
}

/// Runs one check with its own seeded generator and tolerance, timing it and
/// turning errors into `status: error`.
pub fn run_check<F>(settings: &Settings, name: &str, default_tolerance: f64, trials: usize, body: F) -> CheckReport
where
    F: FnOnce(&mut ChaCha8Rng, f64) -> anyhow::Result<Measured>,
{
    let seed = settings.seed_for(name);
    let tolerance = settings.tolerance(name, default_tolerance);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let outcome = body(&mut rng, tolerance);
    let elapsed = start.elapsed().as_secs_f64();
    let (status, max_residual, details) = match outcome {
        Ok(m) => {
            let status = if m.residual < tolerance { Status::Pass } else { Status::Fail };
            (status, m.residual.is_finite().then_some(m.residual), m.details)
        }
        Err(e) => {
            let mut d = Details::new();
            d.insert("error".into(), Value::String(format!("{e:#}")));
            (Status::Error, None, d)
        }
    };
    CheckReport { check: name.to_string(), status, max_residual, tolerance, trials: trials as u64, seed, elapsed, details }
}

/// Final line of a report stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub summary: bool,
    pub status: Status,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub seed: u64,
    pub elapsed: f64,
}

impl Summary {
    pub fn of(reports: &[CheckReport], seed: u64, elapsed: f64) -> Self {
        let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
        let (passed, failed, errors) = (count(Status::Pass), count(Status::Fail), count(Status::Error));
        let status = if errors > 0 {
            Status::Error
        } else if failed > 0 {
            Status::Fail
        } else {
            Status::Pass
        };
        Self { summary: true, status, checks: reports.len(), passed, failed, errors, seed, elapsed }
    }
}

/// Writes one JSON line per report, then the summary.
pub fn write_stream<W: Write>(out: &mut W, reports: &[CheckReport], summary: &Summary) -> std::io::Result<()> {
    for r in reports {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    serde_json::to_writer(&mut *out, summary)?;
    out.write_all(b"\n")
}

/// A report line with its `elapsed` field removed, for comparing runs.
pub fn without_elapsed(line: &str) -> serde_json::Result<Value> {
    let mut v: Value = serde_json::from_str(line)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("elapsed");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_residual() {
        let s = Settings::default();
        let pass = run_check(&s, "t.pass", 1.0, 1, |_, _| Ok(Measured::new(0.5)));
        assert_eq!(pass.status, Status::Pass);
        let fail = run_check(&s, "t.fail", 1.0, 1, |_, _| Ok(Measured::new(1.0)));
        assert_eq!(fail.status, Status::Fail);
        let nan = run_check(&s, "t.nan", 1.0, 1, |_, _| Ok(Measured::new(f64::NAN)));
        assert_eq!(nan.status, Status::Fail);
        assert_eq!(nan.max_residual, None);
        let err = run_check(&s, "t.err", 1.0, 1, |_, _| anyhow::bail!("boom"));
        assert_eq!(err.status, Status::Error);
        assert_eq!(err.details["error"], "boom");
    }

    #[test]
    fn tolerance_override_applies() {
        let mut s = Settings::default();
        s.tolerances.insert("t.x".into(), 0.1);
        assert_eq!(run_check(&s, "t.x", 1.0, 1, |_, _| Ok(Measured::new(0.5))).status, Status::Fail);
    }

    #[test]
    fn summary_and_stream() {
        let s = Settings::default();
        let reports = vec![
            run_check(&s, "a", 1.0, 1, |_, _| Ok(Measured::new(0.0).with("k", 1))),
            run_check(&s, "b", 1.0, 1, |_, _| Ok(Measured::new(2.0))),
        ];
        let summary = Summary::of(&reports, s.seed, 0.0);
        assert_eq!((summary.passed, summary.failed, summary.status), (1, 1, Status::Fail));
        let mut buf = Vec::new();
        write_stream(&mut buf, &reports, &summary).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let first: CheckReport = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first, reports[0]);
        assert!(without_elapsed(lines[2]).unwrap().get("elapsed").is_none());
    }
}
