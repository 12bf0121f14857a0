use crate::{Common, Format};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;
use yfclone::scalar::fmt_q;
use yfclone::Q;

/// Structured error record printed to stderr.
#[derive(Debug, Serialize)]
pub struct Failure {
    #[serde(skip)]
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "usage", message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "io", message: message.into() }
    }
}

impl From<yfclone::Error> for Failure {
    fn from(e: yfclone::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Fixed-column table for `--format csv`.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub command: &'static str,
    pub result: Value,
    pub table: Table,
    pub failed_exact: bool,
    config: Value,
}

impl Outcome {
    pub fn new(command: &'static str, result: Value, table: Table) -> Self {
        Self { command, result, table, failed_exact: false, config: Value::Null }
    }

    pub fn with_config(mut self, c: &Common) -> Self {
        let mut echo = serde_json::to_value(c).expect("config serializes");
        echo["seed"] = json!(c.seed());
        self.config = echo;
        self
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), Failure> {
        let bytes = match format {
            Format::Json => {
                let v = json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": self.command,
                    "config": self.config,
                    "result": self.result,
                });
                let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.header).map_err(|e| Failure::io(e.to_string()))?;
                for r in &self.table.rows {
                    w.write_record(r).map_err(|e| Failure::io(e.to_string()))?;
                }
                w.into_inner().map_err(|e| Failure::io(e.to_string()))?
            }
        };
        match out {
            Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::io(format!("{}: {e}", p.display()))),
            None => std::io::stdout().write_all(&bytes).map_err(|e| Failure::io(e.to_string())),
        }
    }
}

/// Exact values print as "p/q" strings, floats as JSON numbers.
#[derive(Clone, Debug)]
pub enum Num {
    Exact(Q),
    Float(f64),
}

impl Num {
    pub fn json(&self) -> Value {
        match self {
            Num::Exact(q) => Value::String(fmt_q(q)),
            Num::Float(f) => json!(f),
        }
    }

    pub fn cell(&self) -> String {
        match self {
            Num::Exact(q) => fmt_q(q),
            Num::Float(f) => f.to_string(),
        }
    }
}

pub fn fmt_f(v: f64) -> String {
    v.to_string()
}
