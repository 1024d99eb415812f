use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub type Row = Map<String, Value>;

/// Output of one command: a table of rows plus optional scalar summary.
#[derive(Debug, Default)]
pub struct Report {
    pub results: Vec<Row>,
    pub summary: Row,
}

impl Report {
    pub fn push(&mut self, row: Row) {
        self.results.push(row);
    }

    pub fn render(&self, format: Format, config: &Value) -> Result<String, String> {
        match format {
            Format::Json => {
                let mut top = Map::new();
                top.insert("config".into(), config.clone());
                top.insert("results".into(), Value::Array(self.results.iter().cloned().map(Value::Object).collect()));
                if !self.summary.is_empty() {
                    top.insert("summary".into(), Value::Object(self.summary.clone()));
                }
                serde_json::to_string_pretty(&Value::Object(top)).map(|s| s + "\n").map_err(|e| e.to_string())
            }
            Format::Csv => {
                let columns = self.columns();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&columns).map_err(|e| e.to_string())?;
                for row in &self.results {
                    w.write_record(columns.iter().map(|c| row.get(c).map(cell).unwrap_or_default()))
                        .map_err(|e| e.to_string())?;
                }
                String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
            }
            Format::Text => Ok(self.text()),
        }
    }

    /// Summary lines for formats that have no room for them.
    pub fn summary_lines(&self) -> Vec<String> {
        self.summary.iter().map(|(k, v)| format!("{k}: {}", cell(v))).collect()
    }

    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for row in &self.results {
            for k in row.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
        cols
    }

    fn text(&self) -> String {
        let columns = self.columns();
        let cells: Vec<Vec<String>> = self
            .results
            .iter()
            .map(|row| columns.iter().map(|c| row.get(c).map(cell).unwrap_or_default()).collect())
            .collect();
        let widths: Vec<usize> = columns
            .iter()
            .enumerate()
            .map(|(j, c)| cells.iter().map(|r| r[j].len()).max().unwrap_or(0).max(c.len()))
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            let last = items.len().saturating_sub(1);
            for (j, s) in items.iter().enumerate() {
                if j == last {
                    out.push_str(s);
                } else {
                    let _ = write!(out, "{s:<w$}  ", w = widths[j]);
                }
            }
            out.push('\n');
        };
        if !columns.is_empty() {
            line(&mut out, &columns);
            for r in &cells {
                line(&mut out, r);
            }
        }
        for s in self.summary_lines() {
            out.push_str(&s);
            out.push('\n');
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) if items.iter().all(Value::is_string) => {
            items.iter().map(|x| x.as_str().unwrap_or_default()).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    }
}

/// Builds a row from `key => value` pairs.
#[macro_export]
macro_rules! row {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut r = $crate::report::Row::new();
        $(r.insert($k.to_string(), serde_json::to_value($v).unwrap_or(serde_json::Value::Null));)*
        r
    }};
}
