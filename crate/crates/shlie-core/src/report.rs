//! Structured verdicts produced by the verification routines.

use std::fmt;

/// One violated identity: where it happened and the exact residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub context: String,
    pub residual: String,
}

/// Outcome of a family of exact checks. A failure is data, not an error.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, ok: bool, context: impl FnOnce() -> (String, String)) {
        self.checked += 1;
        if !ok {
            let (context, residual) = context();
            self.failures.push(Failure { context, residual });
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{}: ok ({} identities)", self.name, self.checked)
        } else {
            writeln!(
                f,
                "{}: FAILED {}/{} identities",
                self.name,
                self.failures.len(),
                self.checked
            )?;
            for fail in &self.failures {
                writeln!(f, "  at {}: residual {}", fail.context, fail.residual)?;
            }
            Ok(())
        }
    }
}
