use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// An ordered record of named fields, rendered in any output format.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Text => {
                for (k, v) in &self.fields {
                    writeln!(out, "{k}: {}", text_value(v))?;
                }
            }
            Format::Json => {
                let obj: Map<String, Value> = self.fields.iter().cloned().collect();
                writeln!(out, "{}", Value::Object(obj))?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(self.fields.iter().map(|(k, _)| k.as_str()))?;
                w.write_record(self.fields.iter().map(|(_, v)| csv_value(v)))?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            items.iter().map(text_value).collect::<Vec<_>>().join("; ")
        }
        Value::Array(items) => items
            .iter()
            .map(|i| format!("\n  {}", text_value(i)))
            .collect(),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", text_value(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_value).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}
