use std::io::{self, Write};

use serde_json::{json, Map, Value};

use super::config::OutputFormat;

/// One cell of a result table.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    /// Fixed 17-significant-digit rendering so identical runs are byte-identical.
    pub fn render(&self) -> String {
        match self {
            // Adding 0.0 turns -0.0 into 0.0.
            Cell::Float(x) => format!("{:.16e}", x + 0.0),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(x.to_string()),
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(n) => Some(*n as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra per-table JSON payload (density-matrix snapshots).
    pub extra: Option<Value>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            extra: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }
}

/// Provenance written ahead of every table.
#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Header {
    fn lines(&self) -> Vec<(String, String)> {
        vec![
            ("tool".into(), format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))),
            ("command".into(), self.command.clone()),
            ("config_sha256".into(), self.config_hash.clone()),
            ("seed".into(), self.seed.to_string()),
        ]
    }
}

pub fn write_table<W: Write>(out: &mut W, header: &Header, table: &Table, format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(out, header, table),
        OutputFormat::Json => write_json(out, header, table),
    }
}

fn write_csv<W: Write>(out: &mut W, header: &Header, table: &Table) -> io::Result<()> {
    for (k, v) in header.lines() {
        writeln!(out, "# {k} {v}")?;
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<W: Write>(out: &mut W, header: &Header, table: &Table) -> io::Result<()> {
    let mut meta: Map<String, Value> = header.lines().into_iter().map(|(k, v)| (k, json!(v))).collect();
    meta.insert("seed".into(), json!(header.seed));
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            Value::Object(
                table
                    .columns
                    .iter()
                    .cloned()
                    .zip(r.iter().map(Cell::to_json))
                    .collect(),
            )
        })
        .collect();
    let mut doc = json!({ "meta": meta, "columns": table.columns, "rows": rows });
    if let Some(extra) = &table.extra {
        doc["snapshots"] = extra.clone();
    }
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}
