//! Pass/fail reports produced by validators and theorem checkers.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Outcome of one named check. `witnesses` explains failures; passing checks
/// may also carry informational witnesses (for example the ball that realizes
/// a trichotomy condition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            pass: true,
            witnesses: Vec::new(),
        }
    }

    /// Records a failure.
    pub fn fail(&mut self, witness: impl Into<String>) {
        self.pass = false;
        self.witnesses.push(witness.into());
    }

    /// Records a witness without changing the verdict.
    pub fn note(&mut self, witness: impl Into<String>) {
        self.witnesses.push(witness.into());
    }

    /// Fails unless `cond` holds.
    pub fn require(&mut self, cond: bool, witness: impl FnOnce() -> String) {
        if !cond {
            self.fail(witness());
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}",
            self.check,
            if self.pass { "pass" } else { "FAIL" }
        )?;
        for w in &self.witnesses {
            write!(f, "\n  {w}")?;
        }
        Ok(())
    }
}

/// One entry per model invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub model: String,
    pub entries: Vec<CheckReport>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, check: &str) -> Option<&CheckReport> {
        self.entries.iter().find(|e| e.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "model {}: {}",
            self.model,
            if self.is_valid() { "valid" } else { "INVALID" }
        )?;
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

pub(crate) fn error_witness(context: &str, err: &crate::Error) -> String {
    let mut s = context.to_string();
    s.push_str(": ");
    s.push_str(&err.to_string());
    s
}
