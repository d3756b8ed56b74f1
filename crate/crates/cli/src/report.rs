//! Reports and their canonical JSON form: sorted keys, floats as `%.12e`,
//! non-finite floats as `null`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Real(f64),
    Complex(Complex64),
}

impl Quantity {
    fn distance(&self, other: &Quantity) -> f64 {
        (self.as_complex() - other.as_complex()).norm()
    }

    fn magnitude(&self) -> f64 {
        self.as_complex().norm()
    }

    fn as_complex(&self) -> Complex64 {
        match *self {
            Quantity::Real(x) => Complex64::new(x, 0.0),
            Quantity::Complex(z) => z,
        }
    }

    fn to_json(&self) -> Json {
        match *self {
            Quantity::Real(x) => Json::Num(x),
            Quantity::Complex(z) => Json::object([("re", Json::Num(z.re)), ("im", Json::Num(z.im))]),
        }
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl From<Complex64> for Quantity {
    fn from(z: Complex64) -> Self {
        Quantity::Complex(z)
    }
}

/// How a check's value is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// `|value - oracle| ≤ tolerance`.
    Absolute,
    /// `|value - oracle| ≤ tolerance · |oracle|`.
    Relative,
    /// `value ≤ tolerance`; the oracle is the ideal value.
    AtMost,
    /// `value ≥ tolerance`.
    AtLeast,
}

impl Comparison {
    fn name(self) -> &'static str {
        match self {
            Comparison::Absolute => "abs",
            Comparison::Relative => "rel",
            Comparison::AtMost => "at-most",
            Comparison::AtLeast => "at-least",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// The statement being reproduced, in words.
    pub anchor: String,
    pub value: Quantity,
    pub oracle: Quantity,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        value: impl Into<Quantity>,
        oracle: impl Into<Quantity>,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        let value = value.into();
        let oracle = oracle.into();
        let pass = match comparison {
            Comparison::Absolute => value.distance(&oracle) <= tolerance,
            Comparison::Relative => value.distance(&oracle) <= tolerance * oracle.magnitude(),
            Comparison::AtMost => value.magnitude() <= tolerance,
            Comparison::AtLeast => matches!(value, Quantity::Real(x) if x >= tolerance),
        };
        Self {
            name: name.into(),
            anchor: anchor.into(),
            value,
            oracle,
            tolerance,
            comparison,
            pass,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, anchor: impl Into<String>, reason: &str) -> Self {
        Self {
            name: name.into(),
            anchor: format!("{} (error: {reason})", anchor.into()),
            value: Quantity::Real(f64::NAN),
            oracle: Quantity::Real(f64::NAN),
            tolerance: f64::NAN,
            comparison: Comparison::Absolute,
            pass: false,
        }
    }

    fn to_json(&self) -> Json {
        Json::object([
            ("name", Json::Str(self.name.clone())),
            ("anchor", Json::Str(self.anchor.clone())),
            ("value", self.value.to_json()),
            ("oracle", self.oracle.to_json()),
            ("tolerance", Json::Num(self.tolerance)),
            ("comparison", Json::Str(self.comparison.name().into())),
            ("pass", Json::Bool(self.pass)),
        ])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Json {
        Json::object([
            ("name", Json::Str(self.name.clone())),
            ("columns", Json::Arr(self.columns.iter().map(|c| Json::Str(c.clone())).collect())),
            (
                "rows",
                Json::Arr(
                    self.rows
                        .iter()
                        .map(|r| {
                            Json::Arr(
                                r.iter()
                                    .map(|c| match c {
                                        Cell::Num(x) => Json::Num(*x),
                                        Cell::Text(s) => Json::Str(s.clone()),
                                    })
                                    .collect(),
                            )
                        })
                        .collect(),
                ),
            ),
        ])
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Canonical JSON text. Tables are omitted when there are none, so an
    /// empty report is `{"checks":[]}`.
    pub fn to_canonical_json(&self) -> String {
        let mut top = BTreeMap::new();
        top.insert("checks".to_string(), Json::Arr(self.checks.iter().map(Check::to_json).collect()));
        if !self.tables.is_empty() {
            top.insert("tables".to_string(), Json::Arr(self.tables.iter().map(Table::to_json).collect()));
        }
        let mut out = String::new();
        Json::Obj(top).write(&mut out);
        out
    }
}

pub fn emit_report(report: &Report, path: &Path) -> Result<(), CliError> {
    let mut text = report.to_canonical_json();
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// `%.12e` as C's printf renders it: `-1.234567890123e-05`.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

enum Json {
    Null,
    Bool(bool),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(BTreeMap<String, Json>),
}

impl Json {
    fn object<const N: usize>(pairs: [(&str, Json); N]) -> Json {
        Json::Obj(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Num(x) if x.is_finite() => out.push_str(&format_float(*x)),
            Json::Num(_) => Json::Null.write(out),
            Json::Str(s) => {
                let _ = write!(out, "{}", serde_json::Value::String(s.clone()));
            }
            Json::Arr(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(map) => {
                out.push('{');
                for (k, (key, value)) in map.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{}:", serde_json::Value::String(key.clone()));
                    value.write(out);
                }
                out.push('}');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_matches_printf() {
        assert_eq!(format_float(1.0), "1.000000000000e+00");
        assert_eq!(format_float(-0.000123), "-1.230000000000e-04");
        assert_eq!(format_float(6.02e23), "6.020000000000e+23");
        assert_eq!(format_float(1e-300), "1.000000000000e-300");
        assert_eq!(format_float(0.0), "0.000000000000e+00");
    }

    #[test]
    fn empty_report() {
        assert_eq!(Report::default().to_canonical_json(), r#"{"checks":[]}"#);
    }

    #[test]
    fn keys_are_sorted_and_nan_is_null() {
        let mut r = Report::default();
        r.checks.push(Check::new("x", "a \"quoted\" claim", 1.0, 1.0, 0.0, Comparison::Absolute));
        r.checks.push(Check::failed("y", "b", "boom"));
        let text = r.to_canonical_json();
        assert!(text.starts_with(r#"{"checks":[{"anchor":"a \"quoted\" claim","comparison":"abs","name":"x","oracle":1.000000000000e+00,"pass":true,"#));
        assert!(text.contains(r#""value":null"#));
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["checks"][1]["pass"], serde_json::Value::Bool(false));
    }

    #[test]
    fn comparisons() {
        assert!(Check::new("a", "", 1.05, 1.0, 0.1, Comparison::Relative).pass);
        assert!(!Check::new("a", "", 1.2, 1.0, 0.1, Comparison::Relative).pass);
        assert!(Check::new("a", "", 2.0, 1.0, 3.0, Comparison::AtMost).pass);
        assert!(!Check::new("a", "", f64::NAN, 0.0, 3.0, Comparison::AtMost).pass);
        assert!(Check::new("a", "", 150.0, f64::INFINITY, 100.0, Comparison::AtLeast).pass);
        let z = Complex64::new(0.0, 1e-9);
        assert!(Check::new("a", "", z, Complex64::new(0.0, 0.0), 1e-8, Comparison::Absolute).pass);
    }
}
