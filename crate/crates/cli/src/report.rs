use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use siph_core::Verdict;

use crate::args::Format;
use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "si-ph-kit/1";

/// Field order here is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub config: Value,
    pub command: String,
    pub verdict: Verdict,
    pub metrics: BTreeMap<String, Value>,
    pub witnesses: Vec<Value>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(command: String, config: Value) -> Self {
        Self {
            version: SCHEMA_VERSION,
            config,
            command,
            verdict: Verdict::NotRun,
            metrics: BTreeMap::new(),
            witnesses: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn metric(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.metrics.insert(key.to_string(), v);
        self
    }

    /// Keeps the first `max` witnesses and records the total.
    pub fn witnesses<W: Serialize>(&mut self, all: &[W], max: usize) -> &mut Self {
        self.metric("witnesses_total", all.len());
        self.witnesses = all
            .iter()
            .take(max)
            .map(|w| serde_json::to_value(w).unwrap_or(Value::Null))
            .collect();
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict.is_pass() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.to_csv(),
        }
    }

    /// One row per scalar metric, per element of an array metric, and per
    /// witness. Array rows use the singular of the metric name as `kind`
    /// (`radii` → `radius`).
    fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kind", "index", "name", "value", "detail"])?;
        w.write_record(["meta", "0", "command", &self.command, ""])?;
        w.write_record(["meta", "0", "verdict", self.verdict.as_str(), ""])?;
        for (key, v) in &self.metrics {
            match v {
                Value::Array(items) => {
                    let kind = singular(key);
                    for (i, item) in items.iter().enumerate() {
                        let (value, detail) = match item {
                            Value::Object(o) => (
                                o.get(&kind).map(scalar_text).unwrap_or_default(),
                                Value::Object(o.clone()).to_string(),
                            ),
                            other if is_scalar(other) => (scalar_text(other), String::new()),
                            other => (String::new(), other.to_string()),
                        };
                        w.write_record([kind.as_str(), &i.to_string(), key, &value, &detail])?;
                    }
                }
                other if is_scalar(other) => {
                    w.write_record(["metric", "0", key, &scalar_text(other), ""])?;
                }
                other => w.write_record(["metric", "0", key, "", &other.to_string()])?,
            }
        }
        for (i, wit) in self.witnesses.iter().enumerate() {
            w.write_record(["witness", &i.to_string(), "witness", "", &wit.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
    }
}

fn is_scalar(v: &Value) -> bool {
    matches!(v, Value::Null | Value::Bool(_) | Value::Number(_) | Value::String(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn singular(key: &str) -> String {
    if let Some(stem) = key.strip_suffix("ii") {
        format!("{stem}ius")
    } else if let Some(stem) = key.strip_suffix("es").filter(|s| s.ends_with("sh") || s.ends_with('x')) {
        stem.to_string()
    } else if let Some(stem) = key.strip_suffix('s') {
        stem.to_string()
    } else {
        key.to_string()
    }
}
