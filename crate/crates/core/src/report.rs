//! Machine-readable outcome of an identity check.

use serde::{Deserialize, Serialize};

/// Stored failures are capped; `failure_count` keeps the true total.
pub const MAX_STORED_FAILURES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub exponent: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub identity: String,
    pub anchor: String,
    pub scenario: String,
    pub checked: u64,
    pub failures: Vec<Failure>,
    pub failure_count: u64,
    pub skipped: u64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(identity: &str, anchor: &str, scenario: &str) -> Self {
        CheckReport {
            identity: identity.into(),
            anchor: anchor.into(),
            scenario: scenario.into(),
            checked: 0,
            failures: Vec::new(),
            failure_count: 0,
            skipped: 0,
            passed: false,
            seed: None,
            notes: Vec::new(),
        }
    }

    /// Records one exact comparison of displayable values.
    pub fn compare<T: PartialEq + std::fmt::Display>(&mut self, exponent: impl FnOnce() -> Vec<String>, lhs: &T, rhs: &T) {
        self.record(lhs == rhs, || (exponent(), lhs.to_string(), rhs.to_string()));
    }

    /// Records one comparison whose outcome is `ok`; the detail is only rendered on failure.
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> (Vec<String>, String, String)) {
        self.checked += 1;
        if !ok {
            let (e, l, r) = detail();
            self.fail(e, l, r);
        }
    }

    pub fn fail(&mut self, exponent: Vec<String>, lhs: String, rhs: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(Failure { exponent, lhs, rhs });
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Sets `passed` from the counters; an empty check never passes.
    pub fn finish(mut self) -> Self {
        self.passed = self.failure_count == 0 && self.checked > 0;
        if self.checked == 0 {
            self.notes.push("no coefficient was checkable in this window".into());
        }
        self
    }

    /// Folds another report of the same identity into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_STORED_FAILURES {
                self.failures.push(f);
            }
        }
        self.notes.extend(other.notes);
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
