//! Report-style results: a list of named identity checks, each with the
//! basis indices and exact residuals that falsify it.

use serde::Serialize;

use crate::linalg::{format_scalar, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    HypothesisUnmet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub indices: Vec<usize>,
    pub residual: Vec<String>,
}

impl Failure {
    pub fn new(indices: Vec<usize>, residual: &[Scalar]) -> Self {
        Failure {
            indices,
            residual: residual.iter().map(format_scalar).collect(),
        }
    }

    pub fn scalar(indices: Vec<usize>, residual: &Scalar) -> Self {
        Failure {
            indices,
            residual: vec![format_scalar(residual)],
        }
    }

    /// A failure that is not tied to particular basis indices.
    pub fn note(message: impl Into<String>) -> Self {
        Failure {
            indices: Vec::new(),
            residual: vec![message.into()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub anchor: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

/// Failures beyond this many are dropped from an entry to keep reports
/// readable; the status is unaffected.
const MAX_FAILURES: usize = 16;

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    /// Records a check that passes iff `failures` is empty.
    pub fn check(&mut self, anchor: impl Into<String>, mut failures: Vec<Failure>) {
        let status = if failures.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        failures.truncate(MAX_FAILURES);
        self.entries.push(CheckEntry {
            anchor: anchor.into(),
            status,
            failures,
            note: None,
        });
    }

    pub fn check_bool(&mut self, anchor: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        let failures = if ok { Vec::new() } else { vec![Failure::note(detail())] };
        self.check(anchor, failures);
    }

    pub fn unmet(&mut self, anchor: impl Into<String>, note: impl Into<String>) {
        self.entries.push(CheckEntry {
            anchor: anchor.into(),
            status: CheckStatus::HypothesisUnmet,
            failures: Vec::new(),
            note: Some(note.into()),
        });
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    /// True when no entry failed. Unmet hypotheses do not count as failures.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == CheckStatus::Fail)
    }

    pub fn get(&self, anchor: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.anchor == anchor)
    }

    pub fn status(&self, anchor: &str) -> Option<CheckStatus> {
        self.get(anchor).map(|e| e.status)
    }

    pub fn passed(&self, anchor: &str) -> bool {
        self.status(anchor) == Some(CheckStatus::Pass)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
