//! Tabular records and their CSV and JSON renderings.

use std::io::Write;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell. Non-finite floats become the strings `inf`, `-inf` and
/// `nan` in JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::I(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Null, Into::into)
    }
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => format_float(*x),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::F(x) if x.is_finite() => s.serialize_f64(*x),
            Cell::F(x) => s.serialize_str(&format_float(*x)),
            Cell::I(i) => s.serialize_i64(*i),
            Cell::S(t) => s.serialize_str(t),
            Cell::B(b) => s.serialize_bool(*b),
            Cell::Null => s.serialize_none(),
        }
    }
}

/// A row keeps its column order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Row(pub Vec<(String, Cell)>);

impl Row {
    pub fn new() -> Self {
        Row(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub schema_version: u32,
    pub command: String,
    pub parameters: Row,
    pub columns: Vec<String>,
    pub results: Vec<Row>,
    pub diagnostics: Vec<String>,
}

impl Record {
    pub fn new(command: &str, parameters: Row) -> Self {
        Record {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters,
            columns: Vec::new(),
            results: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        if self.columns.is_empty() {
            self.columns = row.0.iter().map(|(k, _)| k.clone()).collect();
        }
        debug_assert!(row.0.iter().map(|(k, _)| k).eq(self.columns.iter()));
        self.results.push(row);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                let header = std::iter::once("schema_version")
                    .chain(self.columns.iter().map(String::as_str));
                w.write_record(header)?;
                for row in &self.results {
                    let cells = std::iter::once(SCHEMA_VERSION.to_string())
                        .chain(row.0.iter().map(|(_, c)| c.csv()));
                    w.write_record(cells)?;
                }
                w.flush()
            }
        }
    }
}
