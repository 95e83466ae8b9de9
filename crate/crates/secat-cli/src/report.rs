//! Report assembly: one JSON schema for every command, plus the
//! human-readable text rendering.
//!
//! The JSON output is byte-identical across runs on the same input: fields
//! are emitted in a fixed order and `timing_ms` is null unless `--timing`
//! is passed (wall-clock time always appears in the text output).

use secat_core::invariants::{InvariantValue, Witness};
use serde::Serialize;

#[derive(Serialize)]
pub struct JsonWitness {
    pub kind: String,
    pub degree: Option<i64>,
    pub detail: String,
}

#[derive(Serialize)]
pub struct JsonReport {
    pub command: String,
    pub model: String,
    pub cap: i64,
    pub complete: bool,
    pub value: Option<u32>,
    pub status: String,
    pub witnesses: Vec<JsonWitness>,
    pub timing_ms: Option<u128>,
}

pub struct Report {
    pub command: String,
    pub model: String,
    pub cap: i64,
    pub complete: bool,
    pub value: Option<u32>,
    pub status: String,
    pub witnesses: Vec<Witness>,
    pub headline: String,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self, timing_ms: Option<u128>) -> String {
        let json = JsonReport {
            command: self.command.clone(),
            model: self.model.clone(),
            cap: self.cap,
            complete: self.complete,
            value: self.value,
            status: self.status.clone(),
            witnesses: self
                .witnesses
                .iter()
                .map(|w| JsonWitness {
                    kind: w.kind.clone(),
                    degree: w.degree,
                    detail: w.detail.clone(),
                })
                .collect(),
            timing_ms,
        };
        let mut s = serde_json::to_string(&json).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self, timing_ms: u128) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} on {} (cap {}): {}\n",
            self.command, self.model, self.cap, self.headline
        ));
        out.push_str(&format!(
            "  status: {}   complete: {}   time: {} ms\n",
            self.status, self.complete, timing_ms
        ));
        for w in &self.witnesses {
            match w.degree {
                Some(d) => out.push_str(&format!("  [{}] (degree {}) {}\n", w.kind, d, w.detail)),
                None => out.push_str(&format!("  [{}] {}\n", w.kind, w.detail)),
            }
        }
        out
    }
}

pub fn value_status(v: &InvariantValue) -> (Option<u32>, String, i32) {
    match v {
        InvariantValue::Determined(n) => (Some(*n), "ok".into(), 0),
        InvariantValue::LowerBound(n) => (Some(*n), "lower_bound_undetermined".into(), 3),
        InvariantValue::Undetermined => (None, "undetermined_at_cap".into(), 3),
    }
}
