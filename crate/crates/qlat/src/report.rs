//! Machine-readable run reports: a versioned list of named checks with
//! observed/expected values, rendered as JSON, CSV, or plain text.
//!
//! JSON payloads are a pure function of the run configuration (seed included)
//! so that identical configs produce byte-identical output regardless of
//! thread count; wall-clock duration therefore appears only in the text
//! rendering.

use serde::Serialize;
use serde_json::{json, Value};

use crate::hilbert::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

/// One named pass/fail record.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub observed: Value,
    pub expected: Value,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// Scalar comparison within an absolute tolerance.
    pub fn close(name: &str, observed: f64, expected: f64, tolerance: f64) -> Check {
        let status = if (observed - expected).abs() <= tolerance && observed.is_finite() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Check {
            name: name.into(),
            status,
            observed: json!(observed),
            expected: json!(expected),
            tolerance,
        }
    }

    /// One-sided comparison: passes when `observed <= limit + tolerance`.
    pub fn at_most(name: &str, observed: f64, limit: f64, tolerance: f64) -> Check {
        let status = if observed <= limit + tolerance && observed.is_finite() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Check {
            name: name.into(),
            status,
            observed: json!(observed),
            expected: json!(format!("<= {limit}")),
            tolerance,
        }
    }

    /// Boolean predicate check.
    pub fn holds(name: &str, observed: bool) -> Check {
        Check {
            name: name.into(),
            status: if observed { CheckStatus::Pass } else { CheckStatus::Fail },
            observed: json!(observed),
            expected: json!(true),
            tolerance: 0.0,
        }
    }

    /// Exact integer comparison.
    pub fn equals(name: &str, observed: i64, expected: i64) -> Check {
        Check {
            name: name.into(),
            status: if observed == expected { CheckStatus::Pass } else { CheckStatus::Fail },
            observed: json!(observed),
            expected: json!(expected),
            tolerance: 0.0,
        }
    }
}

/// Serialize a complex number as a `[re, im]` pair.
pub fn complex_value(z: num_complex::Complex64) -> Value {
    json!([z.re, z.im])
}

/// Configuration echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub dims: [usize; 2],
    pub trials: usize,
    pub master_seed: u64,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// A full run report. `duration` is captured for the text rendering but
/// deliberately excluded from the serialized payload.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
    pub summary: Summary,
    #[serde(skip)]
    pub duration: Option<std::time::Duration>,
}

impl Report {
    pub fn new(command: &str, config: ConfigEcho, checks: Vec<Check>) -> Report {
        let passed = checks.iter().filter(|c| c.passed()).count();
        let summary = Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
        };
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            config,
            checks,
            summary,
            duration: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report is serializable");
        out.push('\n');
        out
    }

    /// Flat projection of the checks array, one row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,status,observed,expected,tolerance\n");
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "fail" };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&c.name),
                status,
                csv_field(&value_compact(&c.observed)),
                csv_field(&value_compact(&c.expected)),
                c.tolerance
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (seed {})\n", self.command, self.config.master_seed);
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "  [{status}] {}: observed {} expected {} (tol {})\n",
                c.name,
                value_compact(&c.observed),
                value_compact(&c.expected),
                c.tolerance
            ));
        }
        out.push_str(&format!(
            "{}/{} checks passed",
            self.summary.passed, self.summary.total
        ));
        if let Some(d) = self.duration {
            out.push_str(&format!(" in {:.3}s", d.as_secs_f64()));
        }
        out.push('\n');
        out
    }
}

fn value_compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
