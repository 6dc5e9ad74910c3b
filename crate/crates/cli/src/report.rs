//! The JSON record every command emits.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "dseries.run-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    /// SHA-256 over the canonical arguments and the contents of every input file.
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
    pub artifacts: Vec<String>,
}

/// Accumulates checks, data and timings for one command.
pub struct Run {
    command: String,
    hasher: Sha256,
    checks: Vec<Check>,
    data: BTreeMap<String, Value>,
    timings: BTreeMap<String, f64>,
    with_timings: bool,
}

impl Run {
    pub fn new(command: &str, with_timings: bool) -> Self {
        let mut hasher = Sha256::new();
        feed(&mut hasher, command.as_bytes());
        Run {
            command: command.to_string(),
            hasher,
            checks: Vec::new(),
            data: BTreeMap::new(),
            timings: BTreeMap::new(),
            with_timings,
        }
    }

    pub fn input(&mut self, key: &str, value: &str) {
        feed(&mut self.hasher, key.as_bytes());
        feed(&mut self.hasher, value.as_bytes());
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, reason: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            reason: reason.into(),
        });
        ok
    }

    pub fn inapplicable(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict: Verdict::Inapplicable,
            reason: reason.into(),
        });
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data.insert(key.to_string(), v);
    }

    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timings
            .insert(label.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn record_time(&mut self, label: &str, ms: f64) {
        self.timings.insert(label.to_string(), ms);
    }

    pub fn finish(self, artifacts: Vec<String>) -> RunReport {
        let digest = self.hasher.finalize();
        RunReport {
            schema: SCHEMA,
            command: self.command,
            inputs_digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
            checks: self.checks,
            data: self.data,
            timings_ms: self.with_timings.then_some(self.timings),
            artifacts,
        }
    }
}

fn feed(h: &mut Sha256, bytes: &[u8]) {
    h.update((bytes.len() as u64).to_le_bytes());
    h.update(bytes);
}

impl RunReport {
    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.verdict == Verdict::Fail)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for (k, v) in &self.data {
            match v {
                Value::Array(items) if v.to_string().len() > 160 => {
                    out.push_str(&format!("  {k}:\n"));
                    for item in items {
                        out.push_str(&format!("    {}\n", compact(item)));
                    }
                }
                _ => out.push_str(&format!("  {k}: {}\n", compact(v))),
            }
        }
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Inapplicable => "N/A ",
            };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.reason));
        }
        if let Some(t) = &self.timings_ms {
            for (k, ms) in t {
                out.push_str(&format!("  time {k}: {ms:.1} ms\n"));
            }
        }
        for a in &self.artifacts {
            out.push_str(&format!("  wrote {a}\n"));
        }
        out
    }
}

fn compact(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 160 {
        format!(
            "{}... ({} bytes)",
            s.chars().take(150).collect::<String>(),
            s.len()
        )
    } else {
        s
    }
}
