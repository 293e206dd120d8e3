//! Structured verdicts shared by the property checks and the CLI.
//!
//! Every check reduces to the same record: a named maximum residual, the
//! witness that attained it, and the tolerance it was judged against.

use serde::{Deserialize, Serialize};

/// Outcome of one numerical check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub max_residual: f64,
    pub witness: String,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    /// A report passes iff the residual is finite and within tolerance.
    pub fn new(
        check: impl Into<String>,
        max_residual: f64,
        witness: impl Into<String>,
        tolerance: f64,
    ) -> Self {
        Self {
            check: check.into(),
            max_residual,
            witness: witness.into(),
            tolerance,
            pass: max_residual.is_finite() && max_residual <= tolerance,
        }
    }

    /// For negative controls: passes iff the residual *exceeds* the threshold.
    pub fn new_lower_bound(
        check: impl Into<String>,
        max_residual: f64,
        witness: impl Into<String>,
        threshold: f64,
    ) -> Self {
        Self {
            check: check.into(),
            max_residual,
            witness: witness.into(),
            tolerance: threshold,
            pass: max_residual.is_finite() && max_residual >= threshold,
        }
    }
}

/// Running maximum over a sample sweep, remembering the argmax witness.
#[derive(Clone, Debug, Default)]
pub struct ResidualScan {
    max: f64,
    witness: String,
    samples: usize,
}

impl ResidualScan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe(&mut self, residual: f64, witness: impl FnOnce() -> String) {
        self.samples += 1;
        // NaN must never pass silently: propagate it as the running max.
        if residual.is_nan() {
            self.max = f64::NAN;
            self.witness = format!("NaN at {}", witness());
        } else if residual > self.max {
            self.max = residual;
            self.witness = witness();
        }
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn into_report(self, check: impl Into<String>, tolerance: f64) -> CheckReport {
        let witness = if self.witness.is_empty() {
            format!("{} samples, all residuals zero", self.samples)
        } else {
            format!("{} ({} samples)", self.witness, self.samples)
        };
        CheckReport::new(check, self.max, witness, tolerance)
    }
}
