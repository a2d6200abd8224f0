//! Construction and evaluation of rational Bernstein operators
//!
//! ```text
//! R_n f(x) = sum_{k=0}^{n} f(x_k) alpha_k x^k (1-x)^(n-k) / Q(x)
//! Q(x)     = sum_{k=0}^{n-1} gamma_k x^k (1-x)^(n-1-k)
//! ```
//!
//! with `alpha_k = gamma_k + gamma_{k-1}` and nodes
//! `x_k = gamma_{k-1} / (gamma_{k-1} + gamma_k)`, the unique choice for which
//! `R_n` reproduces constants and the identity.

use std::fmt;

use serde::Serialize;

use crate::basis::{check_domain, ScaledBernsteinPoly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// First place where the ratios `gamma_{k-1} / gamma_k` stop increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WViolation {
    /// `k` such that `ratio_k >= ratio_{k+1}`; always in `1..n-1`.
    pub index: usize,
    /// `(ratio_k, ratio_{k+1})`.
    pub ratios: (f64, f64),
}

impl fmt::Display for WViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "condition (W) fails at index {}: ratio {} is not below the next ratio {}",
            self.index, self.ratios.0, self.ratios.1
        )
    }
}

/// Strictly increasing grid on `[0, 1]` with both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSequence<T> {
    values: Vec<T>,
}

impl<T: Scalar> NodeSequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidNodes("need at least the two endpoints".into()));
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidNodes("first node must be 0".into()));
        }
        if !values[values.len() - 1].is_one() {
            return Err(Error::InvalidNodes("last node must be 1".into()));
        }
        if let Some(k) = values.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidNodes(format!(
                "nodes {} and {} are not strictly increasing",
                k,
                k + 1
            )));
        }
        Ok(Self { values })
    }

    /// The classical grid `k / n`.
    pub fn uniform(n: usize) -> Self {
        let values = (0..=n).map(|k| T::from_ratio(k as i64, n as i64)).collect();
        Self { values }
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// A positive linear operator on `C[0, 1]` that fixes `1` and `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalBernsteinOperator<T> {
    q: ScaledBernsteinPoly<T>,
    nodes: Vec<T>,
    alpha: Vec<T>,
    /// `ln gamma_k`; drives floating-point evaluation, where the
    /// coefficients themselves can span more than the exponent range.
    log_gamma: Vec<f64>,
}

impl<T: Scalar> RationalBernsteinOperator<T> {
    /// Builds the operator whose denominator has scaled coefficients `gamma`
    /// (degree `n - 1`, so `n = gamma.len()`).
    pub fn from_weight_polynomial(gamma: Vec<T>) -> Result<Self> {
        let q = ScaledBernsteinPoly::new(gamma)?;
        check_w(q.coeffs())?;
        let nodes = raw_nodes(q.coeffs());
        let alpha = alpha_from_gamma(q.coeffs());
        let log_gamma = q.coeffs().iter().map(Scalar::ln_abs).collect();
        Ok(Self { q, nodes, alpha, log_gamma })
    }

    /// Builds the operator with prescribed nodes, setting
    /// `gamma_k = gamma0 * prod_{l=1}^{k} (1 - x_l) / x_l`.
    ///
    /// In `f64` the stored coefficients may underflow to zero for large `n`
    /// (the square-root nodes reach `gamma_{n-1} ~ e^-n`); evaluation is
    /// unaffected because it works from `ln gamma_k`.
    pub fn from_nodes(nodes: NodeSequence<T>, gamma0: T) -> Result<Self> {
        if !(gamma0 > T::zero()) || !gamma0.is_finite() {
            return Err(Error::NonPositiveWeight { index: 0 });
        }
        let x = nodes.values;
        let n = x.len() - 1;
        let mut gamma = Vec::with_capacity(n);
        let mut log_gamma = Vec::with_capacity(n);
        gamma.push(gamma0.clone());
        log_gamma.push(gamma0.ln_abs());
        for l in 1..n {
            let step = (T::one() - x[l].clone()) / x[l].clone();
            let direct = gamma[l - 1].clone() * step.clone();
            let (g, lg) = if T::EXACT || direct.to_f64() >= f64::MIN_POSITIVE {
                let lg = direct.ln_abs();
                (direct, lg)
            } else {
                let lg = log_gamma[l - 1] + step.ln_abs();
                (T::from_f64(lg.exp()), lg)
            };
            if !g.is_finite() {
                return Err(Error::NonFiniteWeight { index: l });
            }
            gamma.push(g);
            log_gamma.push(lg);
        }
        let alpha = alpha_from_gamma(&gamma);
        Ok(Self {
            q: ScaledBernsteinPoly::new(gamma)?,
            nodes: x,
            alpha,
            log_gamma,
        })
    }

    /// The classical Bernstein operator `B_n`.
    pub fn classical(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DegreeTooSmall { n, min: 1 });
        }
        Self::from_nodes(NodeSequence::uniform(n), T::one())
    }

    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Scaled coefficients `gamma_{n-1,k}` of `Q_{n-1}`.
    pub fn gamma(&self) -> &[T] {
        self.q.coeffs()
    }

    pub fn q(&self) -> &ScaledBernsteinPoly<T> {
        &self.q
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Numerator weights `alpha_k = gamma_k + gamma_{k-1}`; the classical
    /// normalised weight is `alpha_k / C(n, k)`.
    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    /// Largest gap between consecutive nodes.
    pub fn delta_n(&self) -> T {
        max_gap(&self.nodes)
    }

    /// `R_n f(x)`. Exact `f(0)` and `f(1)` at the endpoints.
    pub fn apply<F: Fn(&T) -> T>(&self, f: F, x: &T) -> Result<T> {
        check_domain(x)?;
        if x.is_zero() {
            return Ok(f(&self.nodes[0]));
        }
        if x.is_one() {
            return Ok(f(&self.nodes[self.n()]));
        }
        let (num, den) = self.weighted_sums(x, |k| f(&self.nodes[k]));
        Ok(num / den)
    }

    /// `R_n f(x) - f(x)`, summed as `sum_k (f(x_k) - f(x)) w_k(x)` so the
    /// difference carries no cancellation against `f(x)`.
    pub fn apply_deviation<F: Fn(&T) -> T>(&self, f: F, x: &T) -> Result<T> {
        check_domain(x)?;
        if x.is_zero() || x.is_one() {
            return Ok(T::zero());
        }
        let fx = f(x);
        let (num, den) = self.weighted_sums(x, |k| f(&self.nodes[k]) - fx.clone());
        Ok(num / den)
    }

    /// The fundamental functions `alpha_k x^k (1-x)^(n-k) / Q(x)` at `x`.
    /// They are nonnegative and sum to one.
    pub fn fundamental_weights(&self, x: &T) -> Result<Vec<T>> {
        check_domain(x)?;
        let n = self.n();
        let mut w = vec![T::zero(); n + 1];
        if x.is_zero() {
            w[0] = T::one();
            return Ok(w);
        }
        if x.is_one() {
            w[n] = T::one();
            return Ok(w);
        }
        let lower = self.q_terms(x);
        let den = lower.iter().fold(T::zero(), |acc, t| acc + t.clone());
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = self.numerator_term(&lower, k, x) / den.clone();
        }
        Ok(w)
    }

    /// `gamma_k x^k (1-x)^(n-1-k)` for `k = 0..n`, all multiplied by one
    /// common positive factor. Exact in the rational backend; in `f64`
    /// formed from `ln gamma_k` relative to the largest term.
    pub(crate) fn q_terms(&self, x: &T) -> Vec<T> {
        let m = self.n() - 1;
        if T::EXACT {
            let terms = T::basis_terms(m, x);
            return self.q.coeffs().iter().zip(terms).map(|(g, t)| g.clone() * t).collect();
        }
        let xf = x.to_f64();
        let mut out = vec![T::zero(); m + 1];
        if xf == 0.0 || xf == 1.0 {
            out[if xf == 0.0 { 0 } else { m }] = T::one();
            return out;
        }
        let (lx, l1x) = (xf.ln(), (-xf).ln_1p());
        let logs: Vec<f64> = (0..=m)
            .map(|k| self.log_gamma[k] + k as f64 * lx + (m - k) as f64 * l1x)
            .collect();
        let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (o, l) in out.iter_mut().zip(logs) {
            *o = T::from_f64((l - peak).exp());
        }
        out
    }

    /// `alpha_k x^k (1-x)^(n-k)` on the scale of `lower`, using
    /// `x * q_{k-1} + (1-x) * q_k`.
    fn numerator_term(&self, lower: &[T], k: usize, x: &T) -> T {
        let mut v = T::zero();
        if k > 0 {
            v = v + x.clone() * lower[k - 1].clone();
        }
        if k < lower.len() {
            v = v + (T::one() - x.clone()) * lower[k].clone();
        }
        v
    }

    fn weighted_sums<G: Fn(usize) -> T>(&self, x: &T, values: G) -> (T, T) {
        let lower = self.q_terms(x);
        let den = lower.iter().fold(T::zero(), |acc, t| acc + t.clone());
        let num = (0..=self.n()).fold(T::zero(), |acc, k| {
            acc + values(k) * self.numerator_term(&lower, k, x)
        });
        (num, den)
    }

    /// Converts to the `f64` backend.
    pub fn to_f64(&self) -> RationalBernsteinOperator<f64> {
        let conv = |v: &[T]| v.iter().map(Scalar::to_f64).collect::<Vec<_>>();
        RationalBernsteinOperator {
            q: ScaledBernsteinPoly::new(conv(self.q.coeffs()))
                .expect("a valid operator has finite coefficients"),
            nodes: conv(&self.nodes),
            alpha: conv(&self.alpha),
            log_gamma: self.log_gamma.clone(),
        }
    }
}

/// Checks positivity and condition (W): `gamma_{k-1} / gamma_k` strictly
/// increasing in `k`.
pub fn check_w<T: Scalar>(gamma: &[T]) -> Result<()> {
    if gamma.is_empty() {
        return Err(Error::DegreeTooSmall { n: 0, min: 1 });
    }
    if let Some(index) = gamma.iter().position(|g| !(*g > T::zero())) {
        return Err(Error::NonPositiveWeight { index });
    }
    if let Some(index) = gamma.iter().position(|g| !g.is_finite()) {
        return Err(Error::NonFiniteWeight { index });
    }
    let ratios: Vec<T> = gamma
        .windows(2)
        .map(|w| w[0].clone() / w[1].clone())
        .collect();
    // ratios[i] holds the ratio with index k = i + 1
    match ratios
        .windows(2)
        .position(|r| !T::strictly_increases(&r[0], &r[1]))
    {
        None => Ok(()),
        Some(i) => Err(Error::WViolation(WViolation {
            index: i + 1,
            ratios: (ratios[i].to_f64(), ratios[i + 1].to_f64()),
        })),
    }
}

/// Nodes `gamma_{k-1} / (gamma_{k-1} + gamma_k)` without any validation;
/// they need not be increasing or lie in `[0, 1]` unless (W) holds.
pub fn raw_nodes<T: Scalar>(gamma: &[T]) -> Vec<T> {
    let n = gamma.len();
    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(T::zero());
    for k in 1..n {
        let prev = gamma[k - 1].clone();
        nodes.push(prev.clone() / (prev + gamma[k].clone()));
    }
    nodes.push(T::one());
    nodes
}

/// Largest absolute difference between consecutive entries.
pub fn max_gap<T: Scalar>(nodes: &[T]) -> T {
    nodes
        .windows(2)
        .map(|w| (w[1].clone() - w[0].clone()).abs())
        .fold(T::zero(), |acc, g| if g > acc { g } else { acc })
}

fn alpha_from_gamma<T: Scalar>(gamma: &[T]) -> Vec<T> {
    let n = gamma.len();
    (0..=n)
        .map(|k| match k {
            0 => gamma[0].clone(),
            k if k == n => gamma[n - 1].clone(),
            k => gamma[k].clone() + gamma[k - 1].clone(),
        })
        .collect()
}
