use std::fmt;

use serde::{Deserialize, Serialize};

/// One compared quantity inside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency: Option<u64>,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

/// Pass/fail outcome of checking one identity for one subject (usually an order `s`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub subject: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    pub witnesses: Vec<Witness>,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, subject: impl Into<String>) -> Self {
        VerificationReport {
            identity: identity.into(),
            subject: subject.into(),
            passed: true,
            max_deviation: None,
            witnesses: Vec::new(),
        }
    }

    pub fn check(
        &mut self,
        label: impl Into<String>,
        frequency: Option<u64>,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
        passed: bool,
    ) -> &mut Self {
        self.passed &= passed;
        self.witnesses.push(Witness {
            label: label.into(),
            frequency,
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed,
        });
        self
    }

    /// Records an equality check between two displayable values.
    pub fn check_eq<T: PartialEq + fmt::Display>(
        &mut self,
        label: impl Into<String>,
        frequency: Option<u64>,
        expected: &T,
        actual: &T,
    ) -> &mut Self {
        let ok = expected == actual;
        self.check(label, frequency, expected, actual, ok)
    }

    pub fn record_deviation(&mut self, deviation: f64) {
        let current = self.max_deviation.unwrap_or(0.0);
        self.max_deviation = Some(current.max(deviation));
    }

    pub fn failures(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| !w.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} [{}] ({} checks",
            self.identity,
            self.subject,
            self.witnesses.len()
        )?;
        if let Some(d) = self.max_deviation {
            write!(f, ", max deviation {d:.3e}")?;
        }
        write!(f, ")")?;
        for w in self.failures() {
            write!(f, "\n    {}", w.label)?;
            if let Some(n) = w.frequency {
                write!(f, " @ freq {n}")?;
            }
            write!(f, ": expected {}, got {}", w.expected, w.actual)?;
        }
        Ok(())
    }
}
