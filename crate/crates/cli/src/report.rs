use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// One run's output. Text mode prints `lines` followed by the checks; JSON
/// mode serializes everything except `lines`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub status: &'static str,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, Value>,
    #[serde(skip)]
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: String, inputs: &Inputs) -> Self {
        Report {
            command,
            inputs_digest: inputs.digest(),
            status: "ok",
            checks: Vec::new(),
            values: BTreeMap::new(),
            lines: Vec::new(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(key.to_string(), serde_json::to_value(v).expect("report values serialize"));
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        writeln!(out, "# {}", self.command).unwrap();
        writeln!(out, "# inputs sha256:{}", self.inputs_digest).unwrap();
        if self.status != "ok" {
            writeln!(out, "# status: {}", self.status).unwrap();
        }
        for l in &self.lines {
            writeln!(out, "{l}").unwrap();
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(out, "{tag} {}", c.name).unwrap();
            } else {
                writeln!(out, "{tag} {} ({})", c.name, c.detail).unwrap();
            }
        }
        out
    }
}

/// Everything a run reads, in order, for the digest.
#[derive(Debug, Default)]
pub struct Inputs {
    parts: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    pub fn add(&mut self, label: &str, bytes: impl Into<Vec<u8>>) {
        self.parts.push((label.to_string(), bytes.into()));
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (label, bytes) in &self.parts {
            h.update(label.as_bytes());
            h.update([0u8]);
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        hex::encode(h.finalize())
    }
}

/// Echo of the invocation, quoting arguments that need it.
pub fn command_line<I: IntoIterator<Item = String>>(args: I) -> String {
    let quoted: Vec<String> = args
        .into_iter()
        .map(|a| {
            if !a.is_empty() && a.chars().all(|c| c.is_ascii_alphanumeric() || "-_./@=:,".contains(c)) {
                a
            } else {
                format!("'{}'", a.replace('\'', r"'\''"))
            }
        })
        .collect();
    format!("forcekit {}", quoted.join(" "))
}
