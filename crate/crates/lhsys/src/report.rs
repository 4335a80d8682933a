//! Structured pass/fail reports emitted by the verification suite.

use serde::Serialize;

/// One named check: the measured error against its tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: &'static str,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        let passed = measured.is_finite() && measured <= tolerance;
        Check {
            name: name.into(),
            status: if passed { "pass" } else { "fail" },
            measured,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Append-only collection of checks with an overall verdict.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(seed: u64) -> Self {
        RunReport {
            schema_version: 1,
            seed,
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed();
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
