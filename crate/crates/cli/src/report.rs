//! JSON and CSV emission. Every float is written with 17 significant digits
//! so that output round-trips and is byte-identical across runs.

use std::io::Write;

use anyhow::Result;
use serde_json::{Map, Number, Value};

/// `x` as a JSON number with 17 significant digits; non-finite values
/// become the strings `"inf"`, `"-inf"` or `"nan"`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        // Drop the sign of zero.
        let x = if x == 0.0 { 0.0 } else { x };
        let text = format!("{x:.16e}");
        Value::Number(
            text.parse::<Number>()
                .expect("formatted float is valid JSON"),
        )
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

/// Insertion-ordered record of named values.
#[derive(Debug, Clone, Default)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn float(mut self, key: &str, x: f64) -> Self {
        self.fields.push((key.into(), num(x)));
        self
    }

    pub fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.fields.push((key.into(), v.into()));
        self
    }

    /// Append the fields of `other`.
    pub fn merge(mut self, other: Record) -> Self {
        self.fields.extend(other.fields);
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }

    pub fn cells(&self) -> impl Iterator<Item = String> + '_ {
        self.fields.iter().map(|(_, v)| match v {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
    }

    pub fn into_json(self) -> Value {
        Value::Object(self.fields.into_iter().collect::<Map<_, _>>())
    }
}

impl From<Record> for Value {
    fn from(r: Record) -> Value {
        r.into_json()
    }
}

/// Output of a subcommand: a single object or one row per τ.
pub enum Report {
    Object(Record),
    Rows { meta: Record, rows: Vec<Record> },
}

pub fn write_json(report: Report, out: &mut impl Write) -> Result<()> {
    let v = match report {
        Report::Object(r) => r.into_json(),
        Report::Rows { meta, rows } => meta
            .value(
                "rows",
                Value::Array(rows.into_iter().map(Record::into_json).collect()),
            )
            .into_json(),
    };
    serde_json::to_writer_pretty(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}

/// One CSV row per record; a single object becomes a one-row table.
pub fn write_csv(report: Report, out: &mut impl Write) -> Result<()> {
    let rows = match report {
        Report::Object(r) => vec![r],
        Report::Rows { rows, .. } => rows,
    };
    let mut w = csv::Writer::from_writer(out);
    if let Some(first) = rows.first() {
        w.write_record(first.keys())?;
    }
    for r in &rows {
        w.write_record(r.cells())?;
    }
    w.flush()?;
    Ok(())
}
