//! Homogeneous record tables and their deterministic CSV/JSON encodings.
//!
//! CSV follows RFC-4180 quoting with `\n` line endings, a `.` decimal
//! separator and 17 significant digits for floats (exact f64 round-trip).
//! JSON is an array of objects with keys in declared column order;
//! non-finite floats become `null` there.

use serde_json::{json, Map, Value as JsonValue};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Value {
    fn to_csv_field(&self) -> String {
        match self {
            Value::Float(x) => format_float(*x),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => csv_escape(s),
        }
    }

    fn to_json(&self) -> JsonValue {
        match self {
            Value::Float(x) => serde_json::Number::from_f64(*x).map_or(JsonValue::Null, JsonValue::Number),
            Value::Int(i) => json!(i),
            Value::Text(s) => json!(s),
        }
    }
}

/// 17 significant digits; non-finite values print as `nan`/`inf`/`-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(
            &self.columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(","),
        );
        out.push('\n');
        for row in &self.rows {
            out.push_str(
                &row.iter().map(Value::to_csv_field).collect::<Vec<_>>().join(","),
            );
            out.push('\n');
        }
        out
    }

    /// Array of objects, keys in column order.
    pub fn to_json_records(&self) -> JsonValue {
        let records: Vec<JsonValue> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, value) in self.columns.iter().zip(row) {
                    obj.insert(col.clone(), value.to_json());
                }
                JsonValue::Object(obj)
            })
            .collect();
        JsonValue::Array(records)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_records()).expect("table encodes");
        s.push('\n');
        s
    }
}
