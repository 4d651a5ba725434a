//! Structured record of one identity check.

use std::collections::BTreeMap;
use std::time::Instant;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::precision::format_float;
use crate::rational::BigRat;

/// Significant digits used when printing numeric report fields.
pub const REPORT_DIGITS: usize = 45;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub inputs: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub abs_diff: String,
    pub tolerance: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub wall_time_ms: u64,
}

pub fn inputs<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

impl VerificationReport {
    /// Exact rational comparison; tolerance is `"0"`.
    pub fn exact(
        identity_id: &str,
        inputs: BTreeMap<String, String>,
        lhs: &BigRat,
        rhs: &BigRat,
    ) -> Self {
        let diff = BigRat::from(lhs - rhs).abs();
        VerificationReport {
            identity_id: identity_id.to_string(),
            inputs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            abs_diff: diff.to_string(),
            tolerance: "0".to_string(),
            passed: lhs == rhs,
            note: None,
            wall_time_ms: 0,
        }
    }

    /// Numeric comparison `|lhs - rhs| <= tolerance`, decided on the floats
    /// before anything is rounded for printing.
    pub fn numeric(
        identity_id: &str,
        inputs: BTreeMap<String, String>,
        lhs: &Float,
        rhs: &Float,
        tolerance: &Float,
    ) -> Self {
        let prec = lhs.prec().max(rhs.prec());
        let diff = Float::with_val(prec, lhs - rhs).abs();
        let passed = diff <= *tolerance;
        VerificationReport {
            identity_id: identity_id.to_string(),
            inputs,
            lhs: format_float(lhs, REPORT_DIGITS),
            rhs: format_float(rhs, REPORT_DIGITS),
            abs_diff: format_float(&diff, 6),
            tolerance: format_float(tolerance, 6),
            passed,
            note: None,
            wall_time_ms: 0,
        }
    }

    /// A check that could not be carried out.
    pub fn failed(identity_id: &str, inputs: BTreeMap<String, String>, reason: String) -> Self {
        VerificationReport {
            identity_id: identity_id.to_string(),
            inputs,
            lhs: String::new(),
            rhs: String::new(),
            abs_diff: String::new(),
            tolerance: String::new(),
            passed: false,
            note: Some(reason),
            wall_time_ms: 0,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_input(mut self, key: &str, value: impl Into<String>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    /// Copy with the timing field cleared, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            wall_time_ms: 0,
            ..self.clone()
        }
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let inputs = self
            .inputs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mut line = format!(
            "{status} {:<14} {:<28} |diff| = {:<12} tol = {}",
            self.identity_id, inputs, self.abs_diff, self.tolerance
        );
        if let Some(note) = &self.note {
            line.push_str("  # ");
            line.push_str(note);
        }
        line
    }
}

/// Runs `f` and stamps the elapsed wall time on every report it returns.
pub fn timed<F>(f: F) -> Vec<VerificationReport>
where
    F: FnOnce() -> Vec<VerificationReport>,
{
    let start = Instant::now();
    let mut reports = f();
    let ms = start.elapsed().as_millis() as u64;
    for r in &mut reports {
        r.wall_time_ms = ms;
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn exact_reports_carry_exact_difference() {
        let a = Rational::from((1, 8));
        let b = Rational::from((1, 6));
        let r = VerificationReport::exact("x", BTreeMap::new(), &a, &b);
        assert!(!r.passed);
        assert_eq!(r.abs_diff, "1/24");
        assert_eq!(r.tolerance, "0");
        let r = VerificationReport::exact("x", BTreeMap::new(), &a, &a);
        assert!(r.passed);
        assert_eq!(r.abs_diff, "0");
    }

    #[test]
    fn numeric_pass_iff_within_tolerance() {
        let a = Float::with_val(200, 1.0);
        let b = Float::with_val(200, 1.0 + 1e-12);
        let tight = Float::with_val(64, 1e-13);
        let loose = Float::with_val(64, 1e-11);
        assert!(!VerificationReport::numeric("x", BTreeMap::new(), &a, &b, &tight).passed);
        assert!(VerificationReport::numeric("x", BTreeMap::new(), &a, &b, &loose).passed);
    }
}
