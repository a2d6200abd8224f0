//! Dense polynomials in the monomial basis, used for exact divisibility
//! checks in the rational backend.

use std::ops::Mul;

use crate::basis::ScaledBernsteinPoly;
use crate::scalar::Scalar;

/// `sum_j coeffs[j] x^j` with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> PowerPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Expands a scaled Bernstein polynomial into monomials.
    pub fn from_scaled(p: &ScaledBernsteinPoly<T>) -> Self {
        let m = p.degree();
        let mut out = vec![T::zero(); m + 1];
        for (k, g) in p.coeffs().iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            // x^k (1-x)^(m-k) = sum_i C(m-k, i) (-1)^i x^(k+i)
            for i in 0..=m - k {
                let c = g.clone() * T::binomial(m - k, i);
                if i % 2 == 0 {
                    out[k + i] = out[k + i].clone() + c;
                } else {
                    out[k + i] = out[k + i].clone() - c;
                }
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        let Some(top) = self.degree().filter(|&t| t >= d) else {
            return (Self::new(Vec::new()), self.clone());
        };
        let mut quot = vec![T::zero(); top - d + 1];
        for shift in (0..=top - d).rev() {
            let c = rem[shift + d].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j].clone() - c.clone() * dc.clone();
            }
            quot[shift] = c;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }
}

impl<T: Scalar> Mul for &PowerPoly<T> {
    type Output = PowerPoly<T>;

    fn mul(self, rhs: Self) -> PowerPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return PowerPoly::new(Vec::new());
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PowerPoly::new(out)
    }
}
