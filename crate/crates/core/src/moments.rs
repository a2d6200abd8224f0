//! Closed-form moments of rational Bernstein operators.
//!
//! The production path expresses `R_n(e_s)(x) - x^s` as
//!
//! ```text
//! x(1-x)/Q(x) * sum_{l=0}^{s-2} x^l sum_k gamma_k (x_{k+1}^{s-1-l} - x_k^{s-1-l}) x^k (1-x)^(n-1-k)
//! ```
//!
//! in which every summand is nonnegative. Central moments are assembled
//! from these by the binomial expansion of `(t - x)^r`.

use serde::Serialize;

use crate::basis::check_domain;
use crate::error::{Error, Result};
use crate::operator::RationalBernsteinOperator;
use crate::polynomial::PowerPoly;
use crate::scalar::Scalar;
use crate::ScaledBernsteinPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    DirectSum,
}

/// One evaluated moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentValue<T> {
    pub order: usize,
    pub x: T,
    pub value: T,
    pub method: MomentMethod,
}

/// The terms of `Q` and their sum at a fixed interior point, shared by
/// every moment evaluated there.
struct Kernel<'a, T> {
    op: &'a RationalBernsteinOperator<T>,
    x: T,
    terms: Vec<T>,
    q: T,
}

impl<'a, T: Scalar> Kernel<'a, T> {
    fn new(op: &'a RationalBernsteinOperator<T>, x: &T) -> Self {
        let terms = op.q_terms(x);
        let q = terms.iter().fold(T::zero(), |acc, t| acc + t.clone());
        Self { op, x: x.clone(), terms, q }
    }

    /// `R_n(e_s)(x) - x^s` for `s >= 2` at an interior point.
    fn monomial(&self, s: usize) -> T {
        let nodes = self.op.nodes();
        let sum = self.terms.iter().enumerate().fold(T::zero(), |acc, (k, t)| {
            acc + power_gap_series(&nodes[k], &nodes[k + 1], &self.x, s) * t.clone()
        });
        let x = &self.x;
        x.clone() * (T::one() - x.clone()) * sum / self.q.clone()
    }

    fn central(&self, r: usize) -> T {
        (2..=r).fold(T::zero(), |acc, s| {
            let coeff = T::binomial(r, s) * (-self.x.clone()).powi(r - s);
            acc + coeff * self.monomial(s)
        })
    }
}

/// `sum_{l=0}^{s-2} x^l (b^p - a^p)` with `p = s-1-l`, each difference in
/// the factored form `(b - a) sum_i b^i a^(p-1-i)`.
fn power_gap_series<T: Scalar>(a: &T, b: &T, x: &T, s: usize) -> T {
    let gap = b.clone() - a.clone();
    let mut total = T::zero();
    let mut x_pow = T::one();
    for l in 0..=s - 2 {
        let p = s - 1 - l;
        let mut inner = T::zero();
        for i in 0..p {
            inner = inner + b.powi(i) * a.powi(p - 1 - i);
        }
        total = total + x_pow.clone() * inner;
        x_pow = x_pow * x.clone();
    }
    gap * total
}

fn is_endpoint<T: Scalar>(x: &T) -> bool {
    x.is_zero() || x.is_one()
}

/// `R_n(e_s)(x) - x^s` by the closed form; zero for `s = 1` and at the
/// endpoints, strictly positive for `s >= 2` on `(0, 1)`.
pub fn monomial_moment<T: Scalar>(op: &RationalBernsteinOperator<T>, s: usize, x: &T) -> Result<T> {
    if s == 0 {
        return Err(Error::Domain { value: 0.0, domain: "moment order s >= 1" });
    }
    check_domain(x)?;
    if s == 1 || is_endpoint(x) {
        return Ok(T::zero());
    }
    Ok(Kernel::new(op, x).monomial(s))
}

/// All monomial moments of orders `1..=s_max` at one point.
pub fn monomial_moments<T: Scalar>(
    op: &RationalBernsteinOperator<T>,
    s_max: usize,
    x: &T,
) -> Result<Vec<MomentValue<T>>> {
    check_domain(x)?;
    let kernel = (!is_endpoint(x)).then(|| Kernel::new(op, x));
    Ok((1..=s_max)
        .map(|s| MomentValue {
            order: s,
            x: x.clone(),
            value: match &kernel {
                Some(k) if s >= 2 => k.monomial(s),
                _ => T::zero(),
            },
            method: MomentMethod::ClosedForm,
        })
        .collect())
}

/// `R_n(e_s)(x) - x^s` by summing the operator definition directly.
/// Kept as an independent cross-check of [`monomial_moment`].
pub fn direct_sum_monomial_moment<T: Scalar>(
    op: &RationalBernsteinOperator<T>,
    s: usize,
    x: &T,
) -> Result<T> {
    let value = op.apply(|t| t.powi(s), x)?;
    Ok(value - x.powi(s))
}

/// `R_n[(e_1 - x)^r](x)`.
pub fn central_moment<T: Scalar>(op: &RationalBernsteinOperator<T>, r: usize, x: &T) -> Result<T> {
    check_domain(x)?;
    match r {
        0 => Ok(T::one()),
        1 => Ok(T::zero()),
        _ if is_endpoint(x) => Ok(T::zero()),
        _ => Ok(Kernel::new(op, x).central(r)),
    }
}

/// Upper bound `Delta_n M_2(x) (6x^2 - 15x + 12 + Delta_n)` for the fourth
/// central moment.
pub fn fourth_moment_bound<T: Scalar>(op: &RationalBernsteinOperator<T>, x: &T) -> Result<T> {
    let m2 = central_moment(op, 2, x)?;
    let delta = op.delta_n();
    Ok(delta.clone() * m2 * (fourth_moment_factor(x) + delta))
}

/// `6x^2 - 15x + 12`.
pub fn fourth_moment_factor<T: Scalar>(x: &T) -> T {
    T::from_usize(6) * x.clone() * x.clone() - T::from_usize(15) * x.clone() + T::from_usize(12)
}

/// The two sides of the shifted-sum identity:
///
/// ```text
/// A = x/Q(x) sum_k (x - x_{k+1})^r gamma_k x^k (1-x)^(n-1-k)
/// B = sum_{l=0}^{r} C(r,l) x^(r-l) (-1)^l (R_n(e_{l+1})(x) - x^(l+1))
/// ```
///
/// `A = B` for every `r >= 1`. For `r = 0` the binomial sum of the
/// subtracted powers no longer vanishes and `A - B = x`.
pub fn shifted_sum_pair<T: Scalar>(op: &RationalBernsteinOperator<T>, r: usize, x: &T) -> Result<(T, T)> {
    check_domain(x)?;
    let n = op.n();
    let terms = op.q_terms(x);
    let q = terms.iter().fold(T::zero(), |acc, t| acc + t.clone());
    let nodes = op.nodes();
    let sum = (0..n).fold(T::zero(), |acc, k| {
        let shift = (x.clone() - nodes[k + 1].clone()).powi(r);
        acc + shift * terms[k].clone()
    });
    let a = x.clone() * sum / q;

    let kernel = (!is_endpoint(x)).then(|| Kernel::new(op, x));
    let b = (0..=r).fold(T::zero(), |acc, l| {
        let moment = match &kernel {
            Some(k) if l >= 1 => k.monomial(l + 1),
            _ => T::zero(),
        };
        let term = T::binomial(r, l) * x.powi(r - l) * moment;
        if l % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    });
    Ok((a, b))
}

/// `0 <= R_n(e_3)(x) - x^3 <= 3 (R_n(e_2)(x) - x^2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sandwich<T> {
    pub low: T,
    pub value: T,
    pub high: T,
}

impl<T: Scalar> Sandwich<T> {
    pub fn holds(&self, slack: &T) -> bool {
        self.value.clone() >= self.low.clone() - slack.clone()
            && self.value.clone() <= self.high.clone() + slack.clone()
    }
}

pub fn third_moment_sandwich<T: Scalar>(op: &RationalBernsteinOperator<T>, x: &T) -> Result<Sandwich<T>> {
    let m2 = monomial_moment(op, 2, x)?;
    let value = monomial_moment(op, 3, x)?;
    Ok(Sandwich {
        low: T::zero(),
        value,
        high: T::from_usize(3) * m2,
    })
}

/// Exact division of the numerator of `R_n e_2 - x^2`,
/// `x(1-x) sum_k gamma_k (x_{k+1} - x_k) x^k (1-x)^(n-1-k)`, by `Q`.
///
/// Returns `(quotient, remainder)`. The remainder vanishes exactly when
/// `R_n e_2 - x^2` is a polynomial, which happens only for the classical
/// operator.
pub fn second_moment_division<T: Scalar>(op: &RationalBernsteinOperator<T>) -> (PowerPoly<T>, PowerPoly<T>) {
    let nodes = op.nodes();
    let weighted: Vec<T> = op
        .gamma()
        .iter()
        .enumerate()
        .map(|(k, g)| g.clone() * (nodes[k + 1].clone() - nodes[k].clone()))
        .collect();
    let inner = PowerPoly::from_scaled(
        &ScaledBernsteinPoly::new(weighted).expect("finite node gaps and weights"),
    );
    let x_one_minus_x = PowerPoly::new(vec![T::zero(), T::one(), -T::one()]);
    let numerator = &x_one_minus_x * &inner;
    let q = PowerPoly::from_scaled(op.q());
    numerator.div_rem(&q)
}

/// True when `R_n e_2 - x^2` is a polynomial. Meaningful in exact arithmetic.
pub fn second_moment_is_polynomial<T: Scalar>(op: &RationalBernsteinOperator<T>) -> bool {
    second_moment_division(op).1.is_zero()
}
