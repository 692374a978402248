use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::fmt::sig12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "informational",
        }
    }
}

/// Inputs, computed quantities, reference values and verdict of one experiment.
///
/// `checks` names every tolerance check that fed the verdict. All fields
/// except `runtime_seconds` are deterministic functions of the inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub computed: BTreeMap<String, f64>,
    pub reference: BTreeMap<String, f64>,
    #[serde(default)]
    pub checks: BTreeMap<String, bool>,
    pub verdict: Verdict,
    pub runtime_seconds: f64,
}

impl ExperimentRecord {
    pub fn computed(&self, key: &str) -> Option<f64> {
        self.computed.get(key).copied()
    }

    pub fn reference(&self, key: &str) -> Option<f64> {
        self.reference.get(key).copied()
    }

    pub fn check(&self, key: &str) -> Option<bool> {
        self.checks.get(key).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    /// JSON with `runtime_seconds` zeroed; identical inputs give identical payloads.
    pub fn payload_json(&self) -> String {
        let mut copy = self.clone();
        copy.runtime_seconds = 0.0;
        serde_json::to_string(&copy).expect("records serialize")
    }

    /// Header and one row: `name,verdict`, then `computed.<key>`,
    /// `reference.<key>` and `check.<key>` columns. The runtime is left out
    /// so the table is reproducible.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["name".to_string(), "verdict".into()];
        let mut row = vec![self.name.clone(), self.verdict.as_str().into()];
        for (k, v) in &self.computed {
            header.push(format!("computed.{k}"));
            row.push(sig12(*v));
        }
        for (k, v) in &self.reference {
            header.push(format!("reference.{k}"));
            row.push(sig12(*v));
        }
        for (k, v) in &self.checks {
            header.push(format!("check.{k}"));
            row.push(v.to_string());
        }
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

pub(crate) struct RecordBuilder {
    name: String,
    inputs: BTreeMap<String, Value>,
    computed: BTreeMap<String, f64>,
    reference: BTreeMap<String, f64>,
    checks: BTreeMap<String, bool>,
    informational: bool,
    started: Option<Instant>,
}

// `Instant::now` panics on wasm32-unknown-unknown; the runtime is reported as 0 there.
#[cfg(not(target_arch = "wasm32"))]
fn now() -> Option<Instant> {
    Some(Instant::now())
}

#[cfg(target_arch = "wasm32")]
fn now() -> Option<Instant> {
    None
}

impl RecordBuilder {
    pub(crate) fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            inputs: BTreeMap::new(),
            computed: BTreeMap::new(),
            reference: BTreeMap::new(),
            checks: BTreeMap::new(),
            informational: false,
            started: now(),
        }
    }

    pub(crate) fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.inputs.insert(key.into(), v);
        self
    }

    /// Non-finite values are dropped: JSON has no representation for them.
    pub(crate) fn computed(&mut self, key: &str, value: f64) -> &mut Self {
        if value.is_finite() {
            self.computed.insert(key.into(), value);
        }
        self
    }

    pub(crate) fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.computed(key, if value { 1.0 } else { 0.0 })
    }

    pub(crate) fn reference(&mut self, key: &str, value: f64) -> &mut Self {
        if value.is_finite() {
            self.reference.insert(key.into(), value);
        }
        self
    }

    pub(crate) fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.checks.insert(key.into(), ok);
        self
    }

    pub(crate) fn informational(&mut self) -> &mut Self {
        self.informational = true;
        self
    }

    pub(crate) fn finish(&mut self) -> ExperimentRecord {
        let verdict = if self.informational {
            Verdict::Informational
        } else if self.checks.values().all(|&ok| ok) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        ExperimentRecord {
            name: self.name.clone(),
            inputs: std::mem::take(&mut self.inputs),
            computed: std::mem::take(&mut self.computed),
            reference: std::mem::take(&mut self.reference),
            checks: std::mem::take(&mut self.checks),
            verdict,
            runtime_seconds: self.started.map_or(0.0, |s| s.elapsed().as_secs_f64()),
        }
    }
}

/// Summary statistics of a sample, by linear interpolation between order statistics.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub(crate) fn record_distribution(b: &mut RecordBuilder, prefix: &str, values: &[f64]) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    b.computed(&format!("{prefix}_min"), quantile(&sorted, 0.0))
        .computed(&format!("{prefix}_q10"), quantile(&sorted, 0.1))
        .computed(&format!("{prefix}_q25"), quantile(&sorted, 0.25))
        .computed(&format!("{prefix}_median"), quantile(&sorted, 0.5))
        .computed(&format!("{prefix}_q75"), quantile(&sorted, 0.75))
        .computed(&format!("{prefix}_q90"), quantile(&sorted, 0.9))
        .computed(&format!("{prefix}_max"), quantile(&sorted, 1.0))
        .computed(&format!("{prefix}_mean"), mean);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_checks() {
        let mut b = RecordBuilder::new("x");
        b.check("a", true).check("b", true);
        assert_eq!(b.finish().verdict, Verdict::Pass);
        let mut b = RecordBuilder::new("x");
        b.check("a", true).check("b", false);
        assert_eq!(b.finish().verdict, Verdict::Fail);
        let mut b = RecordBuilder::new("x");
        b.check("a", false).informational();
        assert_eq!(b.finish().verdict, Verdict::Informational);
    }

    #[test]
    fn non_finite_values_are_dropped() {
        let mut b = RecordBuilder::new("x");
        b.computed("nan", f64::NAN)
            .computed("inf", f64::INFINITY)
            .computed("ok", 1.5);
        let r = b.finish();
        assert_eq!(r.computed.len(), 1);
        let back: ExperimentRecord = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn payload_ignores_runtime() {
        let mut b = RecordBuilder::new("x");
        b.input("T", 1e3).computed("v", 0.25);
        let mut r1 = b.finish();
        let mut r2 = r1.clone();
        r1.runtime_seconds = 1.0;
        r2.runtime_seconds = 2.0;
        assert_eq!(r1.payload_json(), r2.payload_json());
    }

    #[test]
    fn csv_row() {
        let mut b = RecordBuilder::new("demo");
        b.computed("v", 0.1).reference("r", 2.0).check("ok", true);
        let csv = b.finish().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "name,verdict,computed.v,reference.r,check.ok");
        assert_eq!(lines.next().unwrap(), "demo,pass,0.1,2,true");
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&v, 0.5), 3.0);
        assert_eq!(quantile(&v, 0.25), 2.0);
        assert_eq!(quantile(&v, 0.1), 1.4);
    }
}
