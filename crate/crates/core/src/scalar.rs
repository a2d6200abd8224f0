//! Arithmetic backends.
//!
//! Every construction in this crate is generic over [`Scalar`], which is
//! implemented for `f64` (the production backend) and for [`BigRational`]
//! (an exact oracle backend, intended for degrees up to about 64).

use std::fmt::Debug;

use num::bigint::BigInt;
use num::{BigRational, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Largest degree for which the exact backend is supported by the CLI.
pub const EXACT_MAX_DEGREE: usize = 64;

/// Field operations plus the few kernels that differ between backends.
pub trait Scalar:
    Clone + Debug + PartialOrd + num::Num + Signed + Send + Sync + 'static
{
    /// True for backends without rounding error.
    const EXACT: bool;

    /// Converts a float. Exact for the rational backend (the binary value of
    /// `v` is kept, not a decimal approximation).
    fn from_f64(v: f64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool;

    /// Binomial coefficient C(m, k).
    fn binomial(m: usize, k: usize) -> Self;

    /// `x^k (1-x)^(m-k)` for `k = 0..=m`, at their true scale.
    fn basis_terms(m: usize, x: &Self) -> Vec<Self>;

    /// Basis terms of degrees `m` and `m + 1`, both multiplied by one common
    /// positive factor. Only ratios of sums over these terms are meaningful.
    fn paired_basis_terms(m: usize, x: &Self) -> (Vec<Self>, Vec<Self>);

    /// Strict increase test used by condition (W).
    fn strictly_increases(prev: &Self, next: &Self) -> bool;

    /// `ln |self|` in double precision, without intermediate overflow or
    /// underflow.
    fn ln_abs(&self) -> f64;

    /// Parses a decimal or `p/q` literal.
    fn parse_literal(s: &str) -> Option<Self>;

    /// Lossless textual form: shortest round-trip decimal for `f64`,
    /// `p/q` for rationals.
    fn to_literal(&self) -> String;

    fn from_usize(v: usize) -> Self {
        Self::from_ratio(v as i64, 1)
    }

    fn powi(&self, e: usize) -> Self {
        num::pow(self.clone(), e)
    }
}

/// Relative margin by which consecutive (W) ratios must increase in `f64`.
pub const W_STRICTNESS_RTOL: f64 = 1e-14;

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(v: f64) -> Self {
        v
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn binomial(m: usize, k: usize) -> Self {
        binomial_f64(m, k)
    }

    fn basis_terms(m: usize, x: &Self) -> Vec<Self> {
        let x = *x;
        if let Some(unit) = endpoint_unit(m, x) {
            return unit;
        }
        let (lx, l1x) = (x.ln(), (-x).ln_1p());
        (0..=m)
            .map(|k| (k as f64 * lx + (m - k) as f64 * l1x).exp())
            .collect()
    }

    fn paired_basis_terms(m: usize, x: &Self) -> (Vec<Self>, Vec<Self>) {
        let x = *x;
        if let (Some(lo), Some(hi)) = (endpoint_unit(m, x), endpoint_unit(m + 1, x)) {
            return (lo, hi);
        }
        let (lx, l1x) = (x.ln(), (-x).ln_1p());
        let log_lo = |k: usize| k as f64 * lx + (m - k) as f64 * l1x;
        // The degree-m maximum sits near k = m x; both sequences are
        // unimodal in k so a scan is cheap and exact.
        let peak = (0..=m)
            .map(log_lo)
            .fold(f64::NEG_INFINITY, f64::max);
        let lo = (0..=m).map(|k| (log_lo(k) - peak).exp()).collect();
        let hi = (0..=m + 1)
            .map(|k| (k as f64 * lx + (m + 1 - k) as f64 * l1x - peak).exp())
            .collect();
        (lo, hi)
    }

    fn strictly_increases(prev: &Self, next: &Self) -> bool {
        next - prev > W_STRICTNESS_RTOL * prev.abs().max(next.abs())
    }

    fn ln_abs(&self) -> f64 {
        self.abs().ln()
    }

    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.contains('/') {
            return parse_rational(s).map(|q| Scalar::to_f64(&q));
        }
        s.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn to_literal(&self) -> String {
        format!("{self:?}")
    }
}

fn endpoint_unit(m: usize, x: f64) -> Option<Vec<f64>> {
    let idx = if x == 0.0 {
        0
    } else if x == 1.0 {
        m
    } else {
        return None;
    };
    let mut v = vec![0.0; m + 1];
    v[idx] = 1.0;
    Some(v)
}

/// C(m, k) in double precision.
///
/// Multiplicative recurrence on `min(k, m-k)`: exact while the partial
/// products stay below 2^53, within about `k` ulps beyond that. Symmetric
/// arguments yield bit-identical results. Log-gamma is only used once the
/// recurrence itself overflows.
pub fn binomial_f64(m: usize, k: usize) -> f64 {
    if k > m {
        return 0.0;
    }
    let k = k.min(m - k);
    let mut c = 1.0f64;
    for i in 1..=k {
        c = c * (m - k + i) as f64 / i as f64;
        if !c.is_finite() {
            return ln_binomial(m, k).exp();
        }
    }
    c
}

fn ln_binomial(m: usize, k: usize) -> f64 {
    use statrs::function::gamma::ln_gamma;
    ln_gamma(m as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((m - k) as f64 + 1.0)
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("non-finite float has no exact rational value")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn binomial(m: usize, k: usize) -> Self {
        if k > m {
            return Self::zero();
        }
        let k = k.min(m - k);
        let mut c = BigInt::one();
        for i in 1..=k {
            c = c * BigInt::from(m - k + i) / BigInt::from(i);
        }
        BigRational::from_integer(c)
    }

    fn basis_terms(m: usize, x: &Self) -> Vec<Self> {
        let one_minus = Self::one() - x;
        let xp = powers(x, m);
        let yp = powers(&one_minus, m);
        (0..=m).map(|k| &xp[k] * &yp[m - k]).collect()
    }

    fn paired_basis_terms(m: usize, x: &Self) -> (Vec<Self>, Vec<Self>) {
        let one_minus = Self::one() - x;
        let xp = powers(x, m + 1);
        let yp = powers(&one_minus, m + 1);
        let lo = (0..=m).map(|k| &xp[k] * &yp[m - k]).collect();
        let hi = (0..=m + 1).map(|k| &xp[k] * &yp[m + 1 - k]).collect();
        (lo, hi)
    }

    fn strictly_increases(prev: &Self, next: &Self) -> bool {
        next > prev
    }

    fn ln_abs(&self) -> f64 {
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }

    fn parse_literal(s: &str) -> Option<Self> {
        parse_rational(s)
    }

    fn to_literal(&self) -> String {
        rational_to_string(self)
    }

    fn from_usize(v: usize) -> Self {
        <BigRational as FromPrimitive>::from_usize(v).expect("usize fits in BigInt")
    }
}

fn ln_bigint(v: &BigInt) -> f64 {
    let v = v.abs();
    let bits = v.bits();
    if bits <= 1000 {
        return ToPrimitive::to_f64(&v).unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    ToPrimitive::to_f64(&(v >> shift)).unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

fn powers(base: &BigRational, max: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(BigRational::one());
    for i in 1..=max {
        let next = &out[i - 1] * base;
        out.push(next);
    }
    out
}

/// Formats an exact rational as `"p/q"` (or `"p"` for integers).
pub fn rational_to_string(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(i));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut v = BigRational::from_integer(digits);
    if scale >= 0 {
        v *= num::pow(ten, scale as usize);
    } else {
        v /= num::pow(ten, (-scale) as usize);
    }
    Some(if neg { -v } else { v })
}
