//! Report envelope and its JSON, CSV and table renderings.
//!
//! JSON is the canonical form. CSV and table output flatten the same value:
//! nested keys are joined with `.`, scalar arrays with `;`, and an optional
//! array of records in the result expands into one row per record.

use clap::ValueEnum;
use qfingerprint::{Error, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    pub config: Value,
    pub result: Value,
    /// Result field holding an array of records, one CSV row each.
    pub rows_key: Option<&'static str>,
}

pub fn to_value<S: Serialize>(v: &S) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Format(e.to_string()))
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), cells.join(";")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        v => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Report {
    fn envelope(&self) -> Value {
        json!({
            "tool": "qfp",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "result": self.result,
        })
    }

    fn rows(&self) -> Vec<Vec<(String, String)>> {
        let mut head = Vec::new();
        let mut env = self.envelope();
        let records = self
            .rows_key
            .and_then(|k| env["result"].as_object_mut().and_then(|m| m.remove(k)));
        flatten("", &env, &mut head);
        match records {
            Some(Value::Array(items)) if !items.is_empty() => items
                .iter()
                .map(|item| {
                    let mut row = head.clone();
                    let mut cells = Vec::new();
                    flatten(self.rows_key.unwrap_or_default(), item, &mut cells);
                    row.extend(cells);
                    row
                })
                .collect(),
            _ => vec![head],
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope()).map_err(|e| Error::Format(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let rows = self.rows();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(rows[0].iter().map(|(k, _)| k))?;
                for row in &rows {
                    w.write_record(row.iter().map(|(_, v)| v))?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
            }
            Format::Table => {
                let rows = self.rows();
                let width = rows.iter().flatten().map(|(k, _)| k.len()).max().unwrap_or(0);
                let blocks: Vec<String> = rows
                    .iter()
                    .map(|row| row.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect())
                    .collect();
                Ok(blocks.join("\n"))
            }
        }
    }
}

pub fn skipped(reason: &str) -> Value {
    let mut m = Map::new();
    m.insert("skipped".into(), Value::String(reason.to_string()));
    Value::Object(m)
}
