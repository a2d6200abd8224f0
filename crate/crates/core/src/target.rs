//! Real functions on [0, 1] with optional analytic side information.

use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Names accepted by [`TargetFunction::corpus`].
pub const CORPUS: [&str; 6] = ["e1", "e2", "e3", "exp", "sin_pi", "abs_half"];

#[derive(Clone)]
pub struct TargetFunction {
    label: String,
    eval: RealFn,
    second_derivative: Option<RealFn>,
    omega1: Option<RealFn>,
    omega2: Option<RealFn>,
    monomial_degree: Option<u32>,
}

impl fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetFunction")
            .field("label", &self.label)
            .field("second_derivative", &self.second_derivative.is_some())
            .field("omega1", &self.omega1.is_some())
            .field("omega2", &self.omega2.is_some())
            .finish()
    }
}

fn arc(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
    Arc::new(f)
}

impl TargetFunction {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            eval: arc(eval),
            second_derivative: None,
            omega1: None,
            omega2: None,
            monomial_degree: None,
        }
    }

    pub fn with_second_derivative(mut self, d2: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.second_derivative = Some(arc(d2));
        self
    }

    /// Exact first modulus `h -> omega_1(f, h)`, valid for `0 < h <= 1`.
    pub fn with_omega1(mut self, w: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.omega1 = Some(arc(w));
        self
    }

    /// Exact second modulus, valid for `0 < h <= 1/2`.
    pub fn with_omega2(mut self, w: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.omega2 = Some(arc(w));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn second_derivative(&self, x: f64) -> Option<f64> {
        self.second_derivative.as_ref().map(|d| d(x))
    }

    pub fn has_second_derivative(&self) -> bool {
        self.second_derivative.is_some()
    }

    pub fn analytic_omega1(&self, h: f64) -> Option<f64> {
        self.omega1.as_ref().map(|w| w(h))
    }

    pub fn analytic_omega2(&self, h: f64) -> Option<f64> {
        self.omega2.as_ref().map(|w| w(h))
    }

    /// `Some(s)` when the function is `x^s`.
    pub fn monomial_degree(&self) -> Option<u32> {
        self.monomial_degree
    }

    /// Strips the analytic moduli so that estimates fall back to sampling.
    pub fn without_analytic_moduli(mut self) -> Self {
        self.omega1 = None;
        self.omega2 = None;
        self
    }

    /// One of the built-in functions listed in [`CORPUS`].
    pub fn corpus(name: &str) -> Option<Self> {
        let f = match name {
            "e1" => Self::monomial(1),
            "e2" => Self::monomial(2),
            "e3" => Self::monomial(3),
            "exp" => Self::exp(),
            "sin_pi" => Self::new("sin_pi", |x| (PI * x).sin())
                .with_second_derivative(|x| -PI * PI * (PI * x).sin())
                .with_omega1(|h| if h <= 0.5 { (PI * h).sin() } else { 1.0 })
                .with_omega2(|h| 2.0 * (1.0 - (PI * h).cos())),
            "abs_half" => Self::new("abs_half", |x| (x - 0.5).abs())
                .with_omega1(|h| h.min(0.5))
                .with_omega2(|h| 2.0 * h),
            _ => return None,
        };
        Some(f)
    }

    /// `x^s` for `s` in 0..=3, with exact moduli.
    pub fn monomial(s: u32) -> Self {
        let label = format!("e{s}");
        let mut f = match s {
            0 => Self::constant(1.0),
            1 => Self::new(label, |x| x)
                .with_second_derivative(|_| 0.0)
                .with_omega1(|h| h)
                .with_omega2(|_| 0.0),
            2 => Self::new(label, |x| x * x)
                .with_second_derivative(|_| 2.0)
                .with_omega1(|h| h * (2.0 - h))
                .with_omega2(|h| 2.0 * h * h),
            3 => Self::new(label, |x| x * x * x)
                .with_second_derivative(|x| 6.0 * x)
                .with_omega1(|h| 1.0 - (1.0 - h).powi(3))
                .with_omega2(|h| 6.0 * (1.0 - h) * h * h),
            _ => Self::new(label, move |x| x.powi(s as i32))
                .with_second_derivative(move |x| (s * (s - 1)) as f64 * x.powi(s as i32 - 2)),
        };
        f.monomial_degree = Some(s);
        f
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const_{c}"), move |_| c)
            .with_second_derivative(|_| 0.0)
            .with_omega1(|_| 0.0)
            .with_omega2(|_| 0.0)
    }

    pub fn exp() -> Self {
        Self::new("exp", f64::exp)
            .with_second_derivative(f64::exp)
            .with_omega1(|h| E - (1.0 - h).exp())
            .with_omega2(|h| E * (1.0 - (-h).exp()).powi(2))
    }

    /// `1 + x`.
    pub fn one_plus_x() -> Self {
        Self::new("one_plus_x", |x| 1.0 + x)
            .with_second_derivative(|_| 0.0)
            .with_omega1(|h| h)
            .with_omega2(|_| 0.0)
    }

    /// `a + |x - 1/2|`.
    pub fn phi_abs(a: f64) -> Self {
        Self::new(format!("phi_abs_{a}"), move |x| a + (x - 0.5).abs())
            .with_omega1(|h| h.min(0.5))
            .with_omega2(|h| 2.0 * h)
    }
}
