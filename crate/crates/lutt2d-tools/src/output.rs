//! Deterministic CSV and JSON output with 15 significant digits.

use std::io::Write;

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// `x` rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Shortest decimal text of `round15(x)`; plain notation for moderate
/// exponents, scientific otherwise.
pub fn fmt15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round15(x);
    if r == 0.0 {
        return "0".into();
    }
    let e = r.abs().log10().floor();
    if (-5.0..16.0).contains(&e) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// JSON number rounded to 15 significant digits; non-finite becomes null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round15(x)).map(Value::Number).unwrap_or(Value::Null)
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    /// Value undefined at this point (written as an empty CSV field).
    Missing,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => fmt15(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

/// Rows under a header whose names carry units in brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        w.flush()?;
        Ok(())
    }

    /// `{"columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self, command: &str) -> Value {
        let mut m = Map::new();
        m.insert("columns".into(), Value::from(self.header.clone()));
        m.insert("rows".into(), Value::Array(self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect()));
        document(command, m)
    }
}

/// Top-level JSON object with `schema_version` and `command`.
pub fn document(command: &str, mut body: Map<String, Value>) -> Value {
    body.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    body.insert("command".into(), Value::from(command));
    Value::Object(body)
}

pub fn write_json(v: &Value, out: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    out.write_all(b"\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt15(1.0 / (2.0 * std::f64::consts::PI)), "0.159154943091895");
        assert_eq!(fmt15(-2.5e-9), "-2.5e-9");
        assert_eq!(fmt15(0.0), "0");
        assert_eq!(fmt15(12.0), "12");
        assert_eq!(fmt15(f64::NAN), "nan");
        assert_eq!(num(f64::INFINITY), Value::Null);
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["x [a]", "label"]);
        t.push(vec![Cell::Num(0.5), Cell::from("+")]);
        t.push(vec![Cell::Missing, Cell::Int(-3)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x [a],label\n0.5,+\n,-3\n");
    }
}
