//! Built-in operator families.

use serde::{Deserialize, Serialize};

use crate::basis::ScaledBernsteinPoly;
use crate::error::{Error, Result};
use crate::operator::{NodeSequence, RationalBernsteinOperator};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Classical,
    /// Weight polynomial `1 + x^2`.
    OnePlusXSquared,
    /// Weight polynomial `B_{n-1}(a + |x - 1/2|)`.
    PhiAbs { a: f64 },
    /// Nodes `sqrt(k/n)`.
    SqrtNodes,
    /// Weight polynomial `sum_k s_k C(n-1,k) x^k (1-x)^(n-1-k)` for the
    /// given samples `s_0..s_{n-1}`.
    PhiGeneric { samples: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> Self {
        Self { family, n }
    }
}

/// `phi_a(x) = a + |x - 1/2|`.
pub fn phi_abs_value<T: Scalar>(a: &T, x: &T) -> T {
    a.clone() + (x.clone() - T::from_ratio(1, 2)).abs()
}

pub fn make<T: Scalar>(spec: &FamilySpec) -> Result<RationalBernsteinOperator<T>> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::DegreeTooSmall { n, min: 2 });
    }
    match &spec.family {
        Family::Classical => RationalBernsteinOperator::classical(n),
        Family::OnePlusXSquared => {
            let q = ScaledBernsteinPoly::from_power(&[T::one(), T::zero(), T::one()], n - 1)?;
            RationalBernsteinOperator::from_weight_polynomial(q.into_coeffs())
        }
        Family::PhiAbs { a } => {
            if !(*a > 0.0 && a.is_finite()) {
                return Err(Error::Domain { value: *a, domain: "phi_abs parameter a > 0" });
            }
            let a = T::from_f64(*a);
            let q = bernstein_of_phi(|x: &T| phi_abs_value(&a, x), n - 1)?;
            RationalBernsteinOperator::from_weight_polynomial(q.into_coeffs())
        }
        Family::SqrtNodes => RationalBernsteinOperator::from_nodes(sqrt_nodes(n), T::one()),
        Family::PhiGeneric { samples } => {
            if samples.len() != n {
                return Err(Error::InvalidNodes(format!(
                    "phi_generic needs {n} samples, got {}",
                    samples.len()
                )));
            }
            let gamma = samples
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    if *s > 0.0 && s.is_finite() {
                        Ok(T::from_f64(*s) * T::binomial(n - 1, k))
                    } else {
                        Err(Error::NonPositiveSample { index: k })
                    }
                })
                .collect::<Result<Vec<T>>>()?;
            RationalBernsteinOperator::from_weight_polynomial(gamma)
        }
    }
}

/// Nodes `sqrt(k/n)`, rounded to double precision.
pub fn sqrt_nodes<T: Scalar>(n: usize) -> NodeSequence<T> {
    let values = (0..=n).map(|k| T::from_f64((k as f64 / n as f64).sqrt())).collect();
    NodeSequence::new(values).expect("square roots of k/n increase from 0 to 1")
}

/// The scaled form of the degree-`m` Bernstein polynomial of `phi`:
/// `gamma_k = phi(k/m) C(m,k)`.
pub fn bernstein_of_phi<T: Scalar, F: Fn(&T) -> T>(phi: F, m: usize) -> Result<ScaledBernsteinPoly<T>> {
    let coeffs = (0..=m)
        .map(|k| {
            let v = phi(&T::from_ratio(k as i64, m.max(1) as i64));
            if v > T::zero() && v.is_finite() {
                Ok(v * T::binomial(m, k))
            } else {
                Err(Error::NonPositiveSample { index: k })
            }
        })
        .collect::<Result<Vec<T>>>()?;
    ScaledBernsteinPoly::new(coeffs)
}

/// One row of [`q_divergence_profile`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QProfileRow {
    pub n: usize,
    pub x: f64,
    /// `Q_{n-1}(x) / Q_{n-1}(0)` for the square-root node family.
    pub value: f64,
    /// `(1 - x/2)^(n-1)`.
    pub bound: f64,
}

/// `ln gamma_k` for the square-root node family with `gamma_0 = 1`.
fn sqrt_nodes_log_gamma(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    out.push(acc);
    for l in 1..n {
        let x = (l as f64 / n as f64).sqrt();
        acc += (-x).ln_1p() - x.ln();
        out.push(acc);
    }
    out
}

/// Normalised weight polynomial of the square-root node family, evaluated
/// in log space so that large `n` neither overflows nor underflows.
pub fn q_divergence_profile(ns: &[usize], xs: &[f64]) -> Result<Vec<QProfileRow>> {
    let mut rows = Vec::with_capacity(ns.len() * xs.len());
    for &n in ns {
        if n < 2 {
            return Err(Error::DegreeTooSmall { n, min: 2 });
        }
        let lg = sqrt_nodes_log_gamma(n);
        let m = n - 1;
        for &x in xs {
            crate::basis::check_domain(&x)?;
            let value = if x == 0.0 {
                1.0
            } else if x == 1.0 {
                lg[m].exp()
            } else {
                let (lx, l1x) = (x.ln(), (-x).ln_1p());
                let logs: Vec<f64> = (0..=m)
                    .map(|k| lg[k] + k as f64 * lx + (m - k) as f64 * l1x)
                    .collect();
                let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                peak.exp() * logs.iter().map(|l| (l - peak).exp()).sum::<f64>()
            };
            rows.push(QProfileRow { n, x, value, bound: (1.0 - x / 2.0).powi(m as i32) });
        }
    }
    Ok(rows)
}

/// Checks `gamma_k <= C(n-1,k) 2^(-k)` for every coefficient of the
/// square-root node family; returns the first offending index.
pub fn sqrt_nodes_gamma_violation<T: Scalar>(n: usize) -> Result<Option<usize>> {
    let op = RationalBernsteinOperator::<T>::from_nodes(sqrt_nodes(n), T::one())?;
    let half = T::from_ratio(1, 2);
    Ok(op
        .gamma()
        .iter()
        .enumerate()
        .position(|(k, g)| g.clone() > T::binomial(n - 1, k) * half.powi(k)))
}
