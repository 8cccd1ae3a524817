//! Named pass/fail checks with residuals.
//!
//! Verifiers never raise on a failed axiom; they record it here.

use std::time::{Duration, Instant};

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Measured quantity; for residual checks, the deviation from the identity.
    pub residual: f64,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct CheckReport {
    checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Passes iff `residual ≤ tol` (NaN fails).
    pub fn residual(&mut self, name: &str, residual: f64, tol: f64) {
        self.flag(name, residual <= tol, residual, None);
    }

    pub fn flag(&mut self, name: &str, ok: bool, residual: f64, note: Option<String>) {
        self.push(Check {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual,
            elapsed: Duration::ZERO,
            note,
        });
    }

    pub fn skip(&mut self, name: &str, note: impl Into<String>) {
        self.push(Check {
            name: name.to_string(),
            status: Status::Skipped,
            residual: 0.0,
            elapsed: Duration::ZERO,
            note: Some(note.into()),
        });
    }

    /// Runs `f` and records its residual with the elapsed time.
    pub fn timed(&mut self, name: &str, tol: f64, f: impl FnOnce() -> f64) {
        let start = Instant::now();
        let r = f();
        self.residual(name, r, tol);
        self.checks.last_mut().expect("just pushed").elapsed = start.elapsed();
    }

    /// Appends `other`, prefixing its names with `prefix.`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.status == Status::Pass)
    }

    pub fn failed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.status == Status::Fail)
    }

    /// No check failed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses() {
        let mut r = CheckReport::new();
        r.residual("ok", 1e-12, 1e-9);
        r.residual("nan", f64::NAN, 1e-9);
        r.skip("later", "too large");
        assert!(r.passed("ok"));
        assert!(r.failed("nan"));
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 1);
    }
}
