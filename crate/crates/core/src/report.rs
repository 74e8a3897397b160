//! Check records and their serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub check: String,
    pub input_digest: String,
    pub result: Outcome,
    pub witnesses: Vec<String>,
    pub invariant_factors: BTreeMap<String, Vec<u64>>,
}

impl Record {
    pub fn new(check: impl Into<String>, input_digest: &str, ok: bool) -> Self {
        Record {
            check: check.into(),
            input_digest: input_digest.to_string(),
            result: Outcome::from_bool(ok),
            witnesses: Vec::new(),
            invariant_factors: BTreeMap::new(),
        }
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn witnesses<I: IntoIterator<Item = String>>(mut self, ws: I) -> Self {
        self.witnesses.extend(ws);
        self
    }

    pub fn factors(mut self, key: impl Into<String>, f: &[u64]) -> Self {
        self.invariant_factors.insert(key.into(), f.to_vec());
        self
    }

    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// SHA-256 over length-prefixed parts, hex encoded.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

fn group_text(f: &[u64]) -> String {
    if f.is_empty() {
        "0".into()
    } else {
        f.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

pub fn render(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    for r in records {
        match format {
            Format::Structured => {
                out.push_str(&serde_json::to_string(r).expect("records serialize"));
                out.push('\n');
            }
            Format::Text => {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                let _ = write!(out, "{tag} {} [{}]", r.check, &r.input_digest[..12.min(r.input_digest.len())]);
                for (k, f) in &r.invariant_factors {
                    let _ = write!(out, " {k}={}", group_text(f));
                }
                out.push('\n');
                for w in &r.witnesses {
                    let _ = writeln!(out, "    {w}");
                }
            }
        }
    }
    out
}

/// Appends the rendered records to `path`.
pub fn append(path: &Path, records: &[Record], format: Format) -> std::io::Result<()> {
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    f.write_all(render(records, format).as_bytes())
}
