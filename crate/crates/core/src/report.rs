use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of comparing a closed form against an independent numerical route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Value,
    pub closed_form: [f64; 2],
    pub numeric: [f64; 2],
    pub abs_diff: f64,
    pub tail_estimate: f64,
    pub pass: bool,
}

impl VerificationReport {
    /// Equality-style report: passes when |closed - numeric| <= tolerance.
    pub fn new(
        identity: &str,
        params: Value,
        closed_form: Complex64,
        numeric: Complex64,
        tail_estimate: f64,
        tolerance: f64,
    ) -> Self {
        let abs_diff = (closed_form - numeric).norm();
        Self {
            identity: identity.to_string(),
            params,
            closed_form: [closed_form.re, closed_form.im],
            numeric: [numeric.re, numeric.im],
            abs_diff,
            tail_estimate,
            pass: abs_diff.is_finite() && abs_diff <= tolerance,
        }
    }

    /// Inequality-style report for `numeric <= bound`: `abs_diff` carries the
    /// slack bound - numeric, which may be negative.
    pub fn upper_bound(
        identity: &str,
        params: Value,
        bound: f64,
        numeric: f64,
        tail_estimate: f64,
        tolerance: f64,
    ) -> Self {
        let slack = bound - numeric;
        Self {
            identity: identity.to_string(),
            params,
            closed_form: [bound, 0.0],
            numeric: [numeric, 0.0],
            abs_diff: slack,
            tail_estimate,
            pass: slack.is_finite() && slack >= -tolerance,
        }
    }

    pub fn closed_form_value(&self) -> Complex64 {
        Complex64::new(self.closed_form[0], self.closed_form[1])
    }

    pub fn numeric_value(&self) -> Complex64 {
        Complex64::new(self.numeric[0], self.numeric[1])
    }
}
