//! Polynomials in the binomial-free Bernstein form
//! `p(x) = sum_k gamma_k x^k (1-x)^(m-k)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A degree-`m` polynomial stored by its scaled Bernstein coefficients.
///
/// Relative to the classical Bernstein coefficients `w_k` the stored values
/// are `gamma_k = w_k * C(m, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledBernsteinPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> ScaledBernsteinPoly<T> {
    /// Builds a polynomial of degree `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DegreeTooSmall { n: 0, min: 1 });
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteWeight { index });
        }
        Ok(Self { coeffs })
    }

    /// Ingests classical Bernstein coefficients `w_k`, multiplying by C(m, k).
    pub fn from_classical(w: &[T]) -> Result<Self> {
        let m = w.len().saturating_sub(1);
        Self::new(
            w.iter()
                .enumerate()
                .map(|(k, wk)| wk.clone() * T::binomial(m, k))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Evaluates the polynomial on `[0, 1]`; the endpoints return the first
    /// and last coefficient exactly.
    pub fn eval(&self, x: &T) -> Result<T> {
        check_domain(x)?;
        let m = self.degree();
        if x.is_zero() {
            return Ok(self.coeffs[0].clone());
        }
        if x.is_one() {
            return Ok(self.coeffs[m].clone());
        }
        let terms = T::basis_terms(m, x);
        Ok(dot(&self.coeffs, &terms))
    }

    /// Converts `sum_j a_j x^j` to scaled form at `target_degree`.
    ///
    /// Uses `x^j = x^j (x + (1-x))^(m-j)`, so
    /// `gamma_k = sum_{j<=k} a_j C(m-j, k-j)`.
    pub fn from_power(power_coeffs: &[T], target_degree: usize) -> Result<Self> {
        let degree = power_coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0);
        if degree > target_degree {
            return Err(Error::DegreeTooHigh { degree, target: target_degree });
        }
        let m = target_degree;
        let mut gamma = vec![T::zero(); m + 1];
        for (j, a) in power_coeffs.iter().enumerate().take(degree + 1) {
            if a.is_zero() {
                continue;
            }
            for k in j..=m {
                gamma[k] = gamma[k].clone() + a.clone() * T::binomial(m - j, k - j);
            }
        }
        Self::new(gamma)
    }

    /// Degree elevation: `gamma'_k = gamma_k + gamma_{k-1}` with zero
    /// coefficients outside `0..=m`.
    pub fn degree_raise(&self) -> Self {
        let m = self.degree();
        let raised = (0..=m + 1)
            .map(|k| match k {
                0 => self.coeffs[0].clone(),
                k if k == m + 1 => self.coeffs[m].clone(),
                k => self.coeffs[k].clone() + self.coeffs[k - 1].clone(),
            })
            .collect();
        Self { coeffs: raised }
    }
}

/// `x^k (1-x)^(m-k)` for `k = 0..=m`.
///
/// In `f64` the terms are accumulated in log space, so each is accurate to
/// a few ulps wherever it does not underflow.
pub fn basis_terms<T: Scalar>(m: usize, x: &T) -> Result<Vec<T>> {
    check_domain(x)?;
    Ok(T::basis_terms(m, x))
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (u, v)| acc + u.clone() * v.clone())
}

pub(crate) fn check_domain<T: Scalar>(x: &T) -> Result<()> {
    if *x >= T::zero() && *x <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain { value: x.to_f64(), domain: "[0, 1]" })
    }
}

/// `n` equispaced points on `[0, 1]` including both endpoints.
pub fn unit_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => {
            let last = (points - 1) as f64;
            (0..points).map(|i| i as f64 / last).collect()
        }
    }
}

/// Default number of points for grid checks.
pub const DEFAULT_GRID_POINTS: usize = 1001;
