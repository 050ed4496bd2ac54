//! Report envelope `{command, config, rows, verdict}` and its JSON and CSV
//! renderings.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use pgm_tight::Scalar;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Default for Verdict {
    fn default() -> Self {
        Self {
            status: Status::Pass,
            checks: 0,
            failures: Vec::new(),
        }
    }
}

impl Verdict {
    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.status = Status::Fail;
            self.failures.push(failure());
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub rows: Vec<Value>,
    pub verdict: Verdict,
}

pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, report)?;
            writeln!(sink)?;
        }
        Format::Csv => write_csv(&mut sink, &report.rows)?,
    }
    sink.flush()?;
    Ok(())
}

/// Header is the union of row keys in order of first appearance. Nested
/// values are written as compact JSON.
pub fn write_csv<W: Write>(sink: W, rows: &[Value]) -> anyhow::Result<()> {
    let mut header: Vec<String> = Vec::new();
    for row in rows {
        if let Value::Object(map) = row {
            for key in map.keys() {
                if !header.contains(key) {
                    header.push(key.clone());
                }
            }
        }
    }
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(&header)?;
    for row in rows {
        let cells = header.iter().map(|key| match row.get(key) {
            None | Some(Value::Null) => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(v @ (Value::Array(_) | Value::Object(_))) => v.to_string(),
            Some(v) => v.to_string(),
        });
        w.write_record(cells)?;
    }
    w.flush()?;
    Ok(())
}

/// Floating value of a scalar; non-finite values become `null`.
pub fn num<T: Scalar>(v: &T) -> Value {
    Value::from(v.to_f64())
}

/// Exact text of a rational scalar, `null` in floating point.
pub fn exact<T: Scalar>(v: &T) -> Value {
    if T::is_exact() {
        Value::String(v.to_string())
    } else {
        Value::Null
    }
}

pub fn opt_num<T: Scalar>(v: Option<&T>) -> Value {
    v.map_or(Value::Null, num)
}
