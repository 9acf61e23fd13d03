//! The JSON report written by every subcommand.

use std::collections::BTreeMap;

use agcalc::report::Check;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// Flags as given, minus file paths.
    pub flags: BTreeMap<String, String>,
    /// `sha256:<hex>` of the input bytes.
    pub input_digest: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
    /// Set when the resource guard stopped the run; outputs are partial.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub aborted: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub instances: Vec<Instance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub id: String,
    pub family: String,
    pub n: usize,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

impl Report {
    pub fn new(command: &str, flags: BTreeMap<String, String>, input: &[u8]) -> Report {
        Report {
            command: command.to_string(),
            flags,
            input_digest: digest(input),
            pass: true,
            checks: Vec::new(),
            outputs: BTreeMap::new(),
            warnings: Vec::new(),
            skipped: Vec::new(),
            aborted: false,
            instances: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn output(&mut self, key: &str, v: impl Into<Value>) {
        self.outputs.insert(key.to_string(), v.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = |p: bool| if p { "PASS" } else { "FAIL" };
        out.push_str(&format!("{} {}\n", self.command, status(self.pass)));
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        if self.aborted {
            out.push_str("aborted by the term ceiling; results are partial\n");
        }
        for (k, v) in self.outputs.iter().filter(|(k, _)| !k.ends_with("_terms")) {
            out.push_str(&render_output(k, v, ""));
        }
        for c in &self.checks {
            out.push_str(&check_line(c, ""));
        }
        for s in &self.skipped {
            out.push_str(&format!("skipped: {s}\n"));
        }
        for i in &self.instances {
            out.push_str(&format!("{} {} (n = {})\n", status(i.pass), i.id, i.n));
            for c in i.checks.iter().filter(|c| !c.pass) {
                out.push_str(&check_line(c, "  "));
            }
        }
        out
    }
}

fn check_line(c: &Check, indent: &str) -> String {
    let mut s = format!(
        "{indent}[{}] {}",
        if c.pass { "ok" } else { "FAIL" },
        c.name
    );
    if let Some(d) = &c.detail {
        s.push_str(&format!(": {d}"));
    }
    if let Some(w) = &c.witness {
        s.push_str(&format!(" (at {}: {} vs {})", w.monomial, w.left, w.right));
    }
    s.push('\n');
    s
}

fn render_output(key: &str, v: &Value, indent: &str) -> String {
    match v {
        Value::String(s) => format!("{indent}{key} = {s}\n"),
        Value::Array(items) if items.iter().all(Value::is_string) => items
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{indent}{key}[{}] = {}\n", i + 1, s.as_str().unwrap()))
            .collect(),
        Value::Object(map) => {
            let mut s = format!("{indent}{key}:\n");
            for (k, v) in map {
                s.push_str(&render_output(k, v, &format!("{indent}  ")));
            }
            s
        }
        other => format!("{indent}{key} = {other}\n"),
    }
}
