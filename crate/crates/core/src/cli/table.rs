//! Fixed-precision tables rendered as CSV or JSON.

use serde_json::{Map, Value};

/// Significant digits kept in every emitted number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Shortest text for the rounded value: plain decimal for moderate
/// magnitudes, exponent form otherwise.
pub fn format_number(x: f64) -> String {
    let y = round_sig(x);
    if y == 0.0 {
        "0".into()
    } else if (1e-5..1e15).contains(&y.abs()) {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Empty,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) if x.is_finite() => format_number(x),
            _ => String::new(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(i) => Value::from(i),
            Cell::Num(x) => {
                serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
            }
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub warnings: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, config: Value) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("config".into(), config);
        top.insert("rows".into(), Value::Array(rows));
        top.insert(
            "warnings".into(),
            Value::Array(self.warnings.iter().cloned().map(Value::String).collect()),
        );
        let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
        text.push('\n');
        text
    }

    /// Numeric column by name, skipping empty cells.
    pub fn column(&self, name: &str) -> Vec<Option<f64>> {
        let Some(k) = self.columns.iter().position(|c| *c == name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| match r[k] {
                Cell::Int(i) => Some(i as f64),
                Cell::Num(x) => Some(x),
                Cell::Empty => None,
            })
            .collect()
    }
}
