//! JSON and CSV rendering of command results.

use serde_json::{json, Map, Value};

use crate::scalar::Scalar;

pub const TOOL: &str = "ratbern";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `%.17g`: 17 significant digits, trailing zeros removed.
pub fn fmt_g17(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        trim_fraction(format!("{:.*}", (16 - exp) as usize, v))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mant.to_string()), exp.abs())
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Floats become JSON numbers, exact rationals `"p/q"` strings.
pub fn scalar_json<T: Scalar>(v: &T) -> Value {
    if T::EXACT {
        Value::String(v.to_literal())
    } else {
        json!(v.to_f64())
    }
}

pub fn scalars_json<T: Scalar>(vs: &[T]) -> Value {
    Value::Array(vs.iter().map(scalar_json).collect())
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => fmt_g17(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub struct Table {
    pub key: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// A command result: a versioned JSON body plus the table that the CSV
/// format emits on its own.
pub struct Document {
    pub schema: &'static str,
    pub body: Map<String, Value>,
    pub table: Table,
}

impl Document {
    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("header".into(), json!({ "tool": TOOL, "version": VERSION, "schema": self.schema }));
        root.extend(self.body.clone());
        let rows = self
            .table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .table
                    .columns
                    .iter()
                    .map(|c| c.to_string())
                    .zip(row.iter().cloned())
                    .collect();
                Value::Object(obj)
            })
            .collect();
        root.insert(self.table.key.into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialise");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.table.columns.join(",");
        s.push('\n');
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(0.025), "0.025000000000000001");
        assert_eq!(fmt_g17(0.5), "0.5");
        assert_eq!(fmt_g17(3.0), "3");
        assert_eq!(fmt_g17(-1.25e-7), "-1.2499999999999999e-07");
        assert_eq!(fmt_g17(-0.5e-7), "-4.9999999999999998e-08");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(1.0 / 3.0), "0.33333333333333331");
        for v in [0.1, 1.0 / 7.0, 2.5e-300, 123456.789] {
            assert_eq!(fmt_g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_cells() {
        assert_eq!(csv_cell(&json!(16)), "16");
        assert_eq!(csv_cell(&json!(0.5)), "0.5");
        assert_eq!(csv_cell(&json!("3/7")), "3/7");
        assert_eq!(csv_cell(&Value::Null), "");
        assert_eq!(csv_cell(&json!(true)), "true");
    }
}
