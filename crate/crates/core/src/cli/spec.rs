//! Operator spec documents.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::basis::ScaledBernsteinPoly;
use crate::gallery::{self, Family, FamilySpec};
use crate::operator::{NodeSequence, RationalBernsteinOperator};
use crate::scalar::{Scalar, EXACT_MAX_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Float,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Gamma,
    Nodes,
    PowerPoly,
    Family,
    PhiSamples,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpecDocument {
    pub mode: Mode,
    pub n: usize,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn scalar<T: Scalar>(v: &Value) -> Result<T, CliError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(input(format!("expected a number or \"p/q\" string, got {other}"))),
    };
    T::parse_literal(&text).ok_or_else(|| input(format!("cannot parse numeric value '{text}'")))
}

fn scalars<T: Scalar>(payload: &Value, expected: Option<usize>, what: &str) -> Result<Vec<T>, CliError> {
    let items = payload
        .as_array()
        .ok_or_else(|| input(format!("{what} payload must be an array")))?;
    if let Some(len) = expected {
        if items.len() != len {
            return Err(input(format!("{what} payload needs {len} values, got {}", items.len())));
        }
    }
    items.iter().map(scalar).collect()
}

impl OperatorSpecDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| input(format!("malformed spec: {e}")))?;
        if doc.n == 0 {
            return Err(input("n must be at least 1"));
        }
        Ok(doc)
    }

    /// The same spec at another degree. Only families and power-basis
    /// weights make sense at every degree.
    pub fn with_n(&self, n: usize) -> Result<Self, CliError> {
        if n == self.n {
            return Ok(self.clone());
        }
        match self.mode {
            Mode::Family | Mode::PowerPoly => Ok(Self { n, ..self.clone() }),
            _ => Err(input("--n-list requires a spec with mode \"family\" or \"power_poly\"")),
        }
    }

    pub fn family(&self) -> Result<Option<Family>, CliError> {
        match self.mode {
            Mode::Family => serde_json::from_value(self.payload.clone())
                .map(Some)
                .map_err(|e| input(format!("bad family payload: {e}"))),
            _ => Ok(None),
        }
    }

    /// Builds the operator. Errors from the library, including (W)
    /// violations, are passed through.
    pub fn build<T: Scalar>(&self, backend: Backend) -> Result<RationalBernsteinOperator<T>, CliError> {
        let n = self.n;
        if backend == Backend::Rational && n > EXACT_MAX_DEGREE {
            return Err(input(format!("rational backend supports n <= {EXACT_MAX_DEGREE}, got {n}")));
        }
        let op = match self.mode {
            Mode::Gamma => RationalBernsteinOperator::from_weight_polynomial(scalars(&self.payload, Some(n), "gamma")?)?,
            Mode::Nodes => {
                let nodes = NodeSequence::new(scalars(&self.payload, Some(n + 1), "nodes")?)?;
                let gamma0 = match &self.gamma0 {
                    Some(v) => scalar(v)?,
                    None => T::one(),
                };
                RationalBernsteinOperator::from_nodes(nodes, gamma0)?
            }
            Mode::PowerPoly => {
                let coeffs: Vec<T> = scalars(&self.payload, None, "power_poly")?;
                let q = ScaledBernsteinPoly::from_power(&coeffs, n - 1)?;
                RationalBernsteinOperator::from_weight_polynomial(q.into_coeffs())?
            }
            Mode::Family => {
                let family = self.family()?.expect("family mode");
                gallery::make(&FamilySpec::new(family, n))?
            }
            Mode::PhiSamples => {
                let samples: Vec<f64> = scalars(&self.payload, Some(n), "phi_samples")?;
                gallery::make(&FamilySpec::new(Family::PhiGeneric { samples }, n))?
            }
        };
        Ok(op)
    }
}
