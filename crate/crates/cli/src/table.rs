//! Rectangular numeric result tables with a metadata block.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Meta {
    Number(f64),
    Text(String),
}

impl From<f64> for Meta {
    fn from(v: f64) -> Self {
        Meta::Number(v)
    }
}

impl From<&str> for Meta {
    fn from(v: &str) -> Self {
        Meta::Text(v.to_string())
    }
}

impl From<String> for Meta {
    fn from(v: String) -> Self {
        Meta::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, Meta)>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<Meta>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn meta_number(&self, key: &str) -> Option<f64> {
        self.metadata.iter().find_map(|(k, v)| match v {
            Meta::Number(x) if k == key => Some(*x),
            _ => None,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// CSV with `#` metadata lines, 17 significant digits and LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            match value {
                Meta::Number(x) => writeln!(out, "# {key}: {}", format_number(*x)).unwrap(),
                Meta::Text(t) if t.contains('\n') => {
                    writeln!(out, "# {key}:").unwrap();
                    for line in t.lines() {
                        writeln!(out, "#   {line}").unwrap();
                    }
                }
                Meta::Text(t) => writeln!(out, "# {key}: {t}").unwrap(),
            }
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (key, value) in &self.metadata {
            let v = match value {
                Meta::Number(x) => json_number(*x),
                Meta::Text(t) => Value::String(t.clone()),
            };
            meta.insert(key.clone(), v);
        }
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|v| json_number(*v)).collect()))
            .collect();
        let mut root = Map::new();
        root.insert("metadata".into(), Value::Object(meta));
        root.insert(
            "columns".into(),
            Value::Array(self.columns.iter().cloned().map(Value::String).collect()),
        );
        root.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
        text.push('\n');
        text
    }

    /// Parses the output of [`ResultTable::to_json`].
    pub fn from_json(text: &str) -> Result<Self, String> {
        let root: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let columns = root["columns"]
            .as_array()
            .ok_or("missing columns")?
            .iter()
            .map(|c| c.as_str().map(String::from).ok_or("column name is not a string"))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = root["rows"]
            .as_array()
            .ok_or("missing rows")?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or("row is not an array")?
                    .iter()
                    .map(parse_json_number)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let metadata = root["metadata"]
            .as_object()
            .ok_or("missing metadata")?
            .iter()
            .map(|(k, v)| {
                let m = match v {
                    Value::Number(_) => Meta::Number(parse_json_number(v)?),
                    Value::String(s) => match parse_non_finite(s) {
                        Some(x) => Meta::Number(x),
                        None => Meta::Text(s.clone()),
                    },
                    _ => return Err("unexpected metadata value"),
                };
                Ok((k.clone(), m))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            columns,
            rows,
            metadata,
        })
    }
}

pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        non_finite_name(v).to_string()
    }
}

fn non_finite_name(v: f64) -> &'static str {
    if v.is_nan() {
        "NaN"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

fn parse_non_finite(s: &str) -> Option<f64> {
    match s {
        "NaN" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => None,
    }
}

fn json_number(v: f64) -> Value {
    match Number::from_f64(v) {
        Some(n) => Value::Number(n),
        None => Value::String(non_finite_name(v).to_string()),
    }
}

fn parse_json_number(v: &Value) -> Result<f64, &'static str> {
    match v {
        Value::Number(n) => n.as_f64().ok_or("number out of range"),
        Value::String(s) => parse_non_finite(s).ok_or("non-numeric cell"),
        _ => Err("non-numeric cell"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new(["a", "b"]);
        t.push_row(vec![0.1, -1e-300]);
        t.push_row(vec![f64::NAN, f64::NEG_INFINITY]);
        t.meta("peak", 5.25);
        t.meta("config", "[x]\ny = 1");
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let expected = "# peak: 5.2500000000000000e0\n# config:\n#   [x]\n#   y = 1\na,b\n\
                        1.0000000000000001e-1,-1.0000000000000000e-300\nNaN,-inf\n";
        assert_eq!(csv, expected);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn csv_numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.02214076e23, -2.2250738585072014e-308, 5e-324] {
            let back: f64 = format_number(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let t = sample();
        let back = ResultTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.rows[0], t.rows[0]);
        assert!(back.rows[1][0].is_nan());
        assert_eq!(back.rows[1][1], f64::NEG_INFINITY);
        assert_eq!(back.meta_number("peak"), Some(5.25));
    }

    #[test]
    #[should_panic]
    fn ragged_rows_are_rejected() {
        ResultTable::new(["a", "b"]).push_row(vec![1.0]);
    }
}
