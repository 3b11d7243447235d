//! Run reports: a command echo, the input digest, the seed, a results block
//! and timing. Only the results block is meant to be compared across runs.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA: &str = "avwc-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub input_digest: String,
    pub seed: Option<u64>,
    pub results: Value,
    pub elapsed_ms: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Aligned `key: value` lines; nested objects use dotted keys.
    pub fn to_text(&self) -> String {
        let mut rows = vec![
            ("command".to_string(), self.command.join(" ")),
            ("input_digest".to_string(), self.input_digest.clone()),
            ("seed".to_string(), self.seed.map_or("none".into(), |s| s.to_string())),
        ];
        flatten("", &self.results, &mut rows);
        rows.push(("elapsed_ms".into(), format!("{:.1}", self.elapsed_ms)));
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:>width$}: {v}\n"));
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(_) => v.to_string(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, rows);
            }
        }
        // Tables of records print one row per record.
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), item, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

/// Small helper for building result objects in insertion order.
#[derive(Default)]
pub struct Fields(Map<String, Value>);

impl Fields {
    pub fn new() -> Self {
        Fields::default()
    }

    pub fn put(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn text_rendering_flattens_and_aligns() {
        let r = RunReport {
            schema: REPORT_SCHEMA,
            tool: "avwc",
            version: "0",
            command: vec!["structure".into(), "x.toml".into()],
            input_digest: "sha256:00".into(),
            seed: None,
            results: Fields::new()
                .put("symmetrisable", true)
                .put("witness", Fields::new().put("u", vec![0.5, 0.5]).build())
                .build(),
            elapsed_ms: 1.0,
        };
        let text = r.to_text();
        assert!(text.contains("symmetrisable: true"));
        assert!(text.contains("witness.u: [0.5, 0.5]"));
        let widths: Vec<usize> = text.lines().map(|l| l.find(": ").unwrap()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }
}
