//! Verification reports shared by every check. Field order is fixed by the
//! struct layout and all maps are ordered, so serialization is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok { Status::Pass } else { Status::Fail }
    }
}

/// Wall-clock information; attached only on request so that reports for
/// identical inputs are byte-identical by default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix_ms: u128,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub status: Status,
    pub parameters: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    /// Per-item results, e.g. one entry per Weyl group element.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<Value>,
    /// A bounded sample of discrepancies when the check fails.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diff_sample: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subchecks: Vec<VerificationReport>,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

pub const DIFF_SAMPLE_LIMIT: usize = 20;

impl VerificationReport {
    pub fn new(check: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            status: Status::Pass,
            parameters: BTreeMap::new(),
            metrics: BTreeMap::new(),
            details: Vec::new(),
            diff_sample: Vec::new(),
            subchecks: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timing: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), to_value(value));
        self
    }

    pub fn metric(mut self, key: &str, value: impl Serialize) -> Self {
        self.metrics.insert(key.to_string(), to_value(value));
        self
    }

    pub fn set_metric(&mut self, key: &str, value: impl Serialize) {
        self.metrics.insert(key.to_string(), to_value(value));
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Marks the report failed and records `msg` in the diff sample.
    pub fn fail(&mut self, msg: impl Into<String>) {
        self.status = Status::Fail;
        if self.diff_sample.len() < DIFF_SAMPLE_LIMIT {
            self.diff_sample.push(msg.into());
        }
    }

    /// Attaches a nested report; a failing child fails the parent.
    pub fn push_subcheck(&mut self, child: VerificationReport) {
        if !child.passed() {
            self.status = Status::Fail;
        }
        self.subchecks.push(child);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable value")
}
