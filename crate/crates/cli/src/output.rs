//! Deterministic CSV / JSON rendering of command results.
//!
//! Floats are written with 17 significant digits so they round-trip; data
//! rows never carry timestamps, and per-row timings live in a separate
//! footer (CSV) or field (JSON) that `--no-timings` drops.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits in scientific notation, e.g. `2.6000000000000000e1`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(i) => s.serialize_i128(*i),
            Cell::Float(x) if x.is_finite() => {
                let raw = RawValue::from_string(format_float(*x)).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            Cell::Float(_) => s.serialize_none(),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub timings_ms: Vec<f64>,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        OutputRecord {
            command: command.to_owned(),
            parameters: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            timings_ms: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.parameters.push((key.to_owned(), value.into()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>, elapsed_ms: f64) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
        self.timings_ms.push(elapsed_ms);
    }

    pub fn render(&self, format: Format, timings: bool) -> String {
        match format {
            Format::Csv => self.to_csv(timings),
            Format::Json => self.to_json(timings),
        }
    }

    pub fn to_csv(&self, timings: bool) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        if timings {
            out.push_str("# timings_ms");
            for t in &self.timings_ms {
                let _ = write!(out, ",{t:.3}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, timings: bool) -> String {
        let view = JsonView {
            record: self,
            timings,
        };
        let mut s = serde_json::to_string_pretty(&view).expect("output record serializes");
        s.push('\n');
        s
    }
}

struct JsonView<'a> {
    record: &'a OutputRecord,
    timings: bool,
}

struct Pairs<'a, K: Serialize, V: Serialize>(&'a [(K, V)]);

impl<K: Serialize, V: Serialize> Serialize for Pairs<'_, K, V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct Rows<'a>(&'a OutputRecord);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            let pairs: Vec<(&str, &Cell)> =
                self.0.columns.iter().copied().zip(row.iter()).collect();
            seq.serialize_element(&Pairs(&pairs))?;
        }
        seq.end()
    }
}

impl Serialize for JsonView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = self.record;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("schema_version", SCHEMA_VERSION)?;
        map.serialize_entry("command", &r.command)?;
        map.serialize_entry("parameters", &Pairs(&r.parameters))?;
        map.serialize_entry("columns", &r.columns)?;
        map.serialize_entry("rows", &Rows(r))?;
        if self.timings {
            let t: Vec<Cell> = r.timings_ms.iter().map(|&t| Cell::Float(t)).collect();
            map.serialize_entry("timings_ms", &t)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let mut r = OutputRecord::new("demo", &["a", "x", "ok", "note"]).param("a", 2u64);
        r.push_row(vec![2u64.into(), 0.1.into(), true.into(), "hi".into()], 1.5);
        r.push_row(vec![3u64.into(), f64::NAN.into(), false.into(), "".into()], 0.25);
        r
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1e300, 26.0, f64::MIN_POSITIVE] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(26.0), "2.6000000000000000e1");
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv(false);
        assert_eq!(
            csv,
            "a,x,ok,note\n2,1.0000000000000001e-1,true,hi\n3,NaN,false,\n"
        );
        assert!(sample().to_csv(true).ends_with("# timings_ms,1.500,0.250\n"));
    }

    #[test]
    fn json_layout() {
        let json = sample().to_json(false);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["rows"][0]["x"], 0.1);
        assert!(v["rows"][1]["x"].is_null());
        assert!(v.get("timings_ms").is_none());
        let keys: Vec<&str> = json
            .lines()
            .filter_map(|l| l.trim().strip_prefix('"')?.split('"').next())
            .take(3)
            .collect();
        assert_eq!(keys, ["schema_version", "command", "parameters"]);
        let with = sample().to_json(true);
        let v: serde_json::Value = serde_json::from_str(&with).unwrap();
        assert_eq!(v["timings_ms"].as_array().unwrap().len(), 2);
    }
}
