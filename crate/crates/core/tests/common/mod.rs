#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratbern::{NodeSequence, RationalBernsteinOperator};
use serde_json::Value;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(format!("{name}.v1.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratbern")).args(args).output().expect("binary runs")
}

/// The subset of JSON Schema used by the shipped schemas: `type`, `const`,
/// `enum`, `minimum`, `required`, `properties`, `additionalProperties`
/// (boolean) and `items`.
pub fn validate(schema: &Value, doc: &Value) -> Result<(), String> {
    check(schema, doc, "$")
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        _ => false,
    }
}

fn check(schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    let s = schema.as_object().ok_or(format!("{path}: schema is not an object"))?;
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap_or(""), v)),
            _ => false,
        };
        if !ok {
            return Err(format!("{path}: {v} is not of type {t}"));
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{path}: expected {c}, got {v}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            return Err(format!("{path}: {x} below minimum {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        if let Some(Value::Array(req)) = s.get("required") {
            for key in req.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing '{key}'"));
                }
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (key, value) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => check(sub, value, &format!("{path}.{key}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected property '{key}'"));
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for (i, item) in arr.iter().enumerate() {
            check(items, item, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

/// Strictly increasing nodes `p/10^6` with `n - 1` distinct interior
/// numerators, and a random `gamma_0`.
pub fn random_operator(rng: &mut ChaCha8Rng, n: usize) -> RationalBernsteinOperator<BigRational> {
    let scale = 1_000_000i64;
    let mut numerators = std::collections::BTreeSet::new();
    while numerators.len() < n - 1 {
        numerators.insert(rng.gen_range(1..scale));
    }
    let mut nodes = vec![BigRational::from_integer(0.into())];
    nodes.extend(numerators.into_iter().map(|p| BigRational::new(p.into(), scale.into())));
    nodes.push(BigRational::from_integer(1.into()));
    let gamma0 = BigRational::new(rng.gen_range(1..100i64).into(), rng.gen_range(1..100i64).into());
    RationalBernsteinOperator::from_nodes(NodeSequence::new(nodes).unwrap(), gamma0).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
