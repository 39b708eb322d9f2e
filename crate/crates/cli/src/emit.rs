//! Deterministic table emission.
//!
//! Every command produces a [`Table`]: a fixed column list plus typed
//! cells. Rendering is byte-reproducible by construction — column order is
//! fixed at build time, rows keep input order, floats are always printed
//! as 17-significant-digit scientific notation, and no hash-ordered
//! container touches the output path. CSV quotes fields that contain
//! commas, quotes, or newlines; JSON renders the same table as an object
//! with a `columns` array and one object per row (missing cells become
//! `null`).

use std::io::Write;
use std::path::Path;

use crate::config::Format;

/// One typed table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    /// Not applicable for this row (empty CSV field, JSON `null`).
    Empty,
}

impl Cell {
    pub fn complex_re_im(value: num_complex::Complex64) -> [Cell; 2] {
        [Cell::Float(value.re), Cell::Float(value.im)]
    }

    pub fn opt_float(value: Option<f64>) -> Cell {
        value.map_or(Cell::Empty, Cell::Float)
    }
}

/// A rectangular result table with named columns.
#[derive(Debug)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Table {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; the width must match the column list.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width {} does not match {} columns",
            row.len(),
            self.columns.len()
        );
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Float(v) => out.push_str(&float_repr(*v)),
                    Cell::Int(v) => out.push_str(&v.to_string()),
                    Cell::Bool(v) => out.push_str(if *v { "true" } else { "false" }),
                    Cell::Text(s) => out.push_str(&csv_escape(s)),
                    Cell::Empty => {}
                }
            }
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"columns\": [");
        for (i, col) in self.columns.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&json_string(col));
        }
        out.push_str("],\n  \"rows\": [");
        for (r, row) in self.rows.iter().enumerate() {
            out.push_str(if r > 0 { ",\n    {" } else { "\n    {" });
            for (i, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&json_string(col));
                out.push_str(": ");
                match cell {
                    Cell::Float(v) => out.push_str(&float_repr(*v)),
                    Cell::Int(v) => out.push_str(&v.to_string()),
                    Cell::Bool(v) => out.push_str(if *v { "true" } else { "false" }),
                    Cell::Text(s) => out.push_str(&json_string(s)),
                    Cell::Empty => out.push_str("null"),
                }
            }
            out.push('}');
        }
        if self.rows.is_empty() {
            out.push_str("]\n}\n");
        } else {
            out.push_str("\n  ]\n}\n");
        }
        out
    }
}

/// 17 significant digits in scientific notation: enough to round-trip any
/// double, and a fixed width class so reruns are byte-identical.
fn float_repr(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// JSON string literal with standard escaping (delegated to the JSON
/// serializer so the escape table is never hand-maintained).
fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization is infallible")
}

/// Writes rendered output to `path`, or to stdout when no path is given.
pub fn write_output(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle.write_all(text.as_bytes())
        }
    }
}
