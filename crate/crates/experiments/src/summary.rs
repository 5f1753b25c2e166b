//! Run summaries: every headline metric is stored next to the target it
//! was judged against and the verdict, so a summary can be audited without
//! re-running the scenario.

use serde::{Deserialize, Serialize};

/// Version of the summary JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Acceptance band for one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    /// |value - reference| <= tol.
    Abs { reference: f64, tol: f64 },
    /// |value - reference| <= rel_tol * |reference|.
    Rel { reference: f64, rel_tol: f64 },
    /// min <= value <= max.
    Range { min: f64, max: f64 },
    /// value >= min.
    AtLeast { min: f64 },
    /// value <= max.
    AtMost { max: f64 },
}

impl TargetSpec {
    pub fn check(&self, value: f64) -> bool {
        if !value.is_finite() {
            return false;
        }
        match *self {
            TargetSpec::Abs { reference, tol } => (value - reference).abs() <= tol,
            TargetSpec::Rel { reference, rel_tol } => {
                (value - reference).abs() <= rel_tol * reference.abs()
            }
            TargetSpec::Range { min, max } => value >= min && value <= max,
            TargetSpec::AtLeast { min } => value >= min,
            TargetSpec::AtMost { max } => value <= max,
        }
    }
}

/// One headline metric with its verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricCheck {
    pub name: String,
    pub value: f64,
    pub target: TargetSpec,
    pub pass: bool,
}

impl MetricCheck {
    pub fn new(name: impl Into<String>, value: f64, target: TargetSpec) -> Self {
        let pass = target.check(value);
        Self {
            name: name.into(),
            value,
            target,
            pass,
        }
    }
}

/// What a scenario run produced. Serialized as `summary.json`; the wall
/// time is deliberately excluded so re-runs with the same config and seed
/// are byte-identical.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub targets_version: u32,
    pub scenario: String,
    pub seed: u64,
    pub metrics: Vec<MetricCheck>,
    pub all_pass: bool,
    /// Scenario-specific extras (fitted values, per-case tables). Maps are
    /// key-sorted by the JSON layer, so the layout is deterministic.
    pub details: serde_json::Value,
    #[serde(skip)]
    pub wall_time: std::time::Duration,
}

impl RunSummary {
    pub fn new(
        scenario: &str,
        seed: u64,
        metrics: Vec<MetricCheck>,
        details: serde_json::Value,
    ) -> Self {
        let all_pass = metrics.iter().all(|m| m.pass);
        Self {
            schema_version: SCHEMA_VERSION,
            targets_version: crate::targets::TARGETS_VERSION,
            scenario: scenario.to_string(),
            seed,
            metrics,
            all_pass,
            details,
            wall_time: std::time::Duration::ZERO,
        }
    }

    /// Fixed-width human-readable verdict table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for m in &self.metrics {
            let verdict = if m.pass { "PASS" } else { "FAIL" };
            let target = match m.target {
                TargetSpec::Abs { reference, tol } => format!("{reference} +- {tol}"),
                TargetSpec::Rel { reference, rel_tol } => {
                    format!("{reference} +- {:.1}%", rel_tol * 100.0)
                }
                TargetSpec::Range { min, max } => format!("in [{min}, {max}]"),
                TargetSpec::AtLeast { min } => format!(">= {min}"),
                TargetSpec::AtMost { max } => format!("<= {max}"),
            };
            let value = if m.value != 0.0 && m.value.abs() < 1e-3 {
                format!("{:>14.6e}", m.value)
            } else {
                format!("{:>14.6}", m.value)
            };
            out.push_str(&format!(
                "{verdict}  {name:<38} {value}  target {target}\n",
                name = m.name
            ));
        }
        out
    }
}
