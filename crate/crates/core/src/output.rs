//! Versioned JSON and CSV serialization of result tables.
//!
//! Field order is the column order, floats are written with 17 significant
//! digits, and non-finite floats become `null` (empty in CSV). Nothing is
//! computed here.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::report::InequalityReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Bool(bool),
    Null,
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}
impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::UInt(v)
    }
}
impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::UInt(v as u64)
    }
}
impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}
impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}
impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}
impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}
impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

fn float(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

impl Value {
    fn write_json(&self, out: &mut String) {
        match self {
            Value::Int(v) => write!(out, "{v}").unwrap(),
            Value::UInt(v) => write!(out, "{v}").unwrap(),
            Value::Float(v) => out.push_str(float(*v).as_deref().unwrap_or("null")),
            Value::Str(s) => out.push_str(&serde_json::Value::String(s.clone()).to_string()),
            Value::Bool(b) => write!(out, "{b}").unwrap(),
            Value::Null => out.push_str("null"),
            Value::List(items) => {
                out.push('[');
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    v.write_json(out);
                }
                out.push(']');
            }
            Value::Map(items) => {
                out.push('{');
                for (i, (k, v)) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&serde_json::Value::String(k.clone()).to_string());
                    out.push(':');
                    v.write_json(out);
                }
                out.push('}');
            }
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Value::Float(v) => float(*v).unwrap_or_default(),
            Value::Str(s) => s.clone(),
            Value::Null => String::new(),
            Value::List(_) | Value::Map(_) => {
                let mut s = String::new();
                self.write_json(&mut s);
                s
            }
            other => {
                let mut s = String::new();
                other.write_json(&mut s);
                s
            }
        }
    }
}

/// Rows of one record kind with a fixed column list.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub kind: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(kind: &str, columns: &[&str]) -> Self {
        Table { kind: kind.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the {} header", self.kind);
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Table) {
        assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(crate::Error::descriptor("format", other, "expected json or csv")),
        }
    }
}

/// `{"schema_version":1,"kind":..,"records":[{..}, ..]}` plus a newline.
pub fn to_json(table: &Table) -> String {
    let mut out = String::new();
    write!(out, "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":").unwrap();
    Value::Str(table.kind.clone()).write_json(&mut out);
    out.push_str(",\"records\":[");
    for (i, row) in table.rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let record = Value::Map(table.columns.iter().cloned().zip(row.iter().cloned()).collect());
        record.write_json(&mut out);
    }
    out.push_str("]}\n");
    out
}

/// Header `schema_version,<columns>`; nested values are JSON-encoded fields.
pub fn to_csv(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["schema_version".to_string()];
    header.extend(table.columns.iter().cloned());
    w.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![SCHEMA_VERSION.to_string()];
        rec.extend(row.iter().map(Value::csv_field));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(table: &Table, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(table)),
        Format::Csv => to_csv(table),
    }
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(table: &Table, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(table, format)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub const REPORT_COLUMNS: [&str; 10] =
    ["name", "status", "holds", "lhs", "rhs", "slack", "seed", "inputs", "caveats", "diagnostics"];

pub fn report_row(r: &InequalityReport) -> Vec<Value> {
    vec![
        r.name.as_str().into(),
        r.status.as_str().into(),
        r.holds.into(),
        r.lhs.into(),
        r.rhs.into(),
        r.slack.into(),
        r.seed.into(),
        Value::Map(r.inputs.iter().map(|(k, v)| (k.clone(), Value::Str(v.clone()))).collect()),
        Value::List(r.caveats.iter().map(|c| Value::Str(c.clone())).collect()),
        Value::Map(r.diagnostics.iter().map(|(k, v)| (k.clone(), Value::Float(*v))).collect()),
    ]
}

pub fn report_table(reports: &[InequalityReport]) -> Table {
    let mut t = Table::new("inequality_report", &REPORT_COLUMNS);
    for r in reports {
        t.push(report_row(r));
    }
    t
}
