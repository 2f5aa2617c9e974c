//! Records rendered as CSV or JSON with 12 significant digits.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<Option<f64>> for Field {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Field::Empty, Field::Num)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

/// Ordered `(column, value)` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Field)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Field>) -> Self {
        self.0.push((key, value.into()));
        self
    }
}

/// `%.12g`-style decimal: fixed notation for moderate exponents, scientific otherwise.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" { "0".into() } else { t.to_string() }
}

/// The value a reader recovers from the rendered decimal.
pub fn rounded(x: f64) -> f64 {
    format_number(x).parse().unwrap_or(x)
}

fn csv_cell(f: &Field) -> String {
    match f {
        Field::Num(x) => format_number(*x),
        Field::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Field::Text(s) => s.clone(),
        Field::Bool(b) => b.to_string(),
        Field::Empty => String::new(),
    }
}

fn json_value(f: &Field) -> Value {
    match f {
        Field::Num(x) => Number::from_f64(rounded(*x)).map_or(Value::Null, Value::Number),
        Field::Text(s) => Value::String(s.clone()),
        Field::Bool(b) => Value::Bool(*b),
        Field::Empty => Value::Null,
    }
}

/// Renders with the given header; records must carry exactly these columns.
pub fn render(header: &[&str], records: &[Record], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = header.join(",");
            out.push('\n');
            for r in records {
                debug_assert!(r.0.iter().map(|(k, _)| *k).eq(header.iter().copied()));
                let cells: Vec<String> = r.0.iter().map(|(_, v)| csv_cell(v)).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
            out
        }
        Format::Json => {
            let arr: Vec<Value> = records
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    for (k, v) in &r.0 {
                        m.insert((*k).to_string(), json_value(v));
                    }
                    Value::Object(m)
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&Value::Array(arr)).expect("values serialize");
            s.push('\n');
            s
        }
    }
}

pub fn header_of(records: &[Record], fallback: &[&'static str]) -> Vec<&'static str> {
    records
        .first()
        .map_or_else(|| fallback.to_vec(), |r| r.0.iter().map(|(k, _)| *k).collect())
}
