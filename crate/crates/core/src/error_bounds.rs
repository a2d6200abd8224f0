//! Moduli of continuity and the pointwise error certificates built on them.
//!
//! Every certificate compares an observed error `|R_n f(x) - f(x)|` with a
//! bound of the form `prefactor(x) * omega(f, h)`. Bounds are evaluated in
//! double precision.

use std::collections::VecDeque;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::operator::{max_gap, raw_nodes, RationalBernsteinOperator};
use crate::scalar::Scalar;
pub use crate::target::TargetFunction;

/// Tolerance for certificates whose modulus is known in closed form.
pub const ANALYTIC_TOLERANCE: f64 = 1e-10;

/// Tolerance for certificates that rely on a sampled modulus, which can
/// only underestimate the true one.
pub const SAMPLED_TOLERANCE: f64 = 1e-3;

/// Finest grid used for sampled moduli.
pub const MIN_GRID_STEP: f64 = 1.0 / (1u64 << 22) as f64;

/// Points per unit used when estimating a continuum minimum.
const MIN_SEARCH_POINTS: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusKind {
    Sampled,
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub order: u8,
    pub h: f64,
    pub value: f64,
    /// Zero for analytic values.
    pub grid_step: f64,
    pub kind: ModulusKind,
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { value: h, domain: "modulus step h > 0" })
    }
}

/// Grid `i/N` with `1/N <= step`.
fn sample(f: &TargetFunction, step: f64) -> (Vec<f64>, f64) {
    let step = step.max(MIN_GRID_STEP);
    let n = (1.0 / step).ceil() as usize;
    let values = (0..=n).map(|i| f.eval(i as f64 / n as f64)).collect();
    (values, 1.0 / n as f64)
}

/// Largest index offset `d` with `d * g <= h`.
fn window(h: f64, g: f64) -> usize {
    (h / g * (1.0 + 1e-12)).floor() as usize
}

/// `omega_1(f, h)`. Steps above 1 are treated as 1.
pub fn modulus1(f: &TargetFunction, h: f64, grid_step: Option<f64>) -> Result<ModulusEstimate> {
    check_step(h)?;
    let h = h.min(1.0);
    if let Some(value) = f.analytic_omega1(h) {
        return Ok(ModulusEstimate { order: 1, h, value, grid_step: 0.0, kind: ModulusKind::Analytic });
    }
    Ok(sampled_modulus1(f, h, grid_step.unwrap_or(h / 64.0)))
}

/// Sampled `omega_1`: the largest oscillation over windows of width `h`,
/// tracked with monotone deques.
pub fn sampled_modulus1(f: &TargetFunction, h: f64, grid_step: f64) -> ModulusEstimate {
    let (v, g) = sample(f, grid_step);
    let w = window(h, g);
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for j in 0..v.len() {
        while maxq.back().is_some_and(|&i| v[i] <= v[j]) {
            maxq.pop_back();
        }
        maxq.push_back(j);
        while minq.back().is_some_and(|&i| v[i] >= v[j]) {
            minq.pop_back();
        }
        minq.push_back(j);
        let start = j.saturating_sub(w);
        while maxq[0] < start {
            maxq.pop_front();
        }
        while minq[0] < start {
            minq.pop_front();
        }
        best = best.max(v[maxq[0]] - v[minq[0]]);
    }
    ModulusEstimate { order: 1, h, value: best, grid_step: g, kind: ModulusKind::Sampled }
}

/// `omega_2(f, h)` for `0 < h <= 1/2`.
pub fn modulus2(f: &TargetFunction, h: f64, grid_step: Option<f64>) -> Result<ModulusEstimate> {
    if !(h > 0.0 && h <= 0.5) {
        return Err(Error::Domain { value: h, domain: "second modulus step 0 < h <= 1/2" });
    }
    if let Some(value) = f.analytic_omega2(h) {
        return Ok(ModulusEstimate { order: 2, h, value, grid_step: 0.0, kind: ModulusKind::Analytic });
    }
    Ok(sampled_modulus2(f, h, grid_step.unwrap_or(h / 64.0)))
}

pub fn sampled_modulus2(f: &TargetFunction, h: f64, grid_step: f64) -> ModulusEstimate {
    let (v, g) = sample(f, grid_step);
    let n = v.len() - 1;
    let w = window(h, g);
    let mut best = 0.0f64;
    for i in 1..n {
        for d in 1..=w.min(i).min(n - i) {
            best = best.max((v[i + d] - 2.0 * v[i] + v[i - d]).abs());
        }
    }
    ModulusEstimate { order: 2, h, value: best, grid_step: g, kind: ModulusKind::Sampled }
}

/// Where a bound was evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Point(f64),
    SupOverGrid,
}

impl Serialize for Location {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Location::Point(x) => s.serialize_f64(*x),
            Location::SupOverGrid => s.serialize_str("sup over grid"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: f64,
    pub observed: f64,
    pub slack: f64,
    pub location: Location,
    pub modulus: ModulusKind,
    pub tolerance: f64,
}

impl BoundReport {
    fn new(bound: f64, observed: f64, x: f64, modulus: ModulusKind) -> Self {
        let tolerance = match modulus {
            ModulusKind::Analytic => ANALYTIC_TOLERANCE,
            ModulusKind::Sampled => SAMPLED_TOLERANCE,
        };
        Self { bound, observed, slack: bound - observed, location: Location::Point(x), modulus, tolerance }
    }

    pub fn holds(&self) -> bool {
        self.slack >= -self.tolerance
    }
}

/// Summary of pointwise reports over a grid: largest observed error,
/// largest bound and the worst slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub sup_observed: f64,
    pub sup_bound: f64,
    pub worst: BoundReport,
}

impl GridSummary {
    pub fn from_reports(reports: impl IntoIterator<Item = BoundReport>) -> Option<Self> {
        let mut it = reports.into_iter();
        let first = it.next()?;
        let init = Self { sup_observed: first.observed, sup_bound: first.bound, worst: first };
        Some(it.fold(init, |mut acc, r| {
            acc.sup_observed = acc.sup_observed.max(r.observed);
            acc.sup_bound = acc.sup_bound.max(r.bound);
            if r.slack < acc.worst.slack {
                acc.worst = r;
            }
            acc
        }))
    }

    pub fn holds(&self) -> bool {
        self.worst.holds()
    }
}

/// `|R_n f(x) - f(x)|`, summed as deviations from `f(x)`.
pub fn observed_error(op: &RationalBernsteinOperator<f64>, f: &TargetFunction, x: f64) -> Result<f64> {
    Ok(op.apply_deviation(|t| f.eval(*t), &x)?.abs())
}

/// `(1 + sqrt(x(1-x))) omega_1(f, sqrt(Delta_n))`.
pub fn bound_omega1(op: &RationalBernsteinOperator<f64>, f: &TargetFunction, x: f64) -> Result<BoundReport> {
    let observed = observed_error(op, f, x)?;
    let w = modulus1(f, op.delta_n().sqrt(), None)?;
    let bound = (1.0 + (x * (1.0 - x)).sqrt()) * w.value;
    Ok(BoundReport::new(bound, observed, x, w.kind))
}

/// `(1 + x(1-x)/2) omega_2(f, sqrt(Delta_n))`.
///
/// On [0, 1] the second modulus is constant for steps beyond 1/2, so the
/// step is capped there.
pub fn bound_omega2(op: &RationalBernsteinOperator<f64>, f: &TargetFunction, x: f64) -> Result<BoundReport> {
    let observed = observed_error(op, f, x)?;
    let w = modulus2(f, op.delta_n().sqrt().min(0.5), None)?;
    let bound = (1.0 + 0.5 * x * (1.0 - x)) * w.value;
    Ok(BoundReport::new(bound, observed, x, w.kind))
}

/// The node-gap bound for operators whose weight polynomial is the
/// Bernstein polynomial of a positive function `phi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiDeltaBound {
    pub n: usize,
    /// `omega_1(phi, 1/(n-1)) / (2 m) + 1/n` with `m` the minimum of `phi`
    /// on [0, 1], estimated on a fine grid that contains the samples.
    pub value: f64,
    pub m: f64,
    /// Same expression with `m` taken over the samples `k/(n-1)` only.
    pub value_sample_min: f64,
    pub m_samples: f64,
    pub omega1: ModulusEstimate,
}

fn sample_min(phi: &TargetFunction, m: usize) -> Result<f64> {
    (0..=m).try_fold(f64::INFINITY, |acc, k| {
        let v = phi.eval(k as f64 / m as f64);
        if v > 0.0 && v.is_finite() {
            Ok(acc.min(v))
        } else {
            Err(Error::NonPositiveSample { index: k })
        }
    })
}

fn continuum_min(phi: &TargetFunction) -> f64 {
    (0..=MIN_SEARCH_POINTS)
        .map(|i| phi.eval(i as f64 / MIN_SEARCH_POINTS as f64))
        .fold(f64::INFINITY, f64::min)
}

pub fn phi_delta_bound(phi: &TargetFunction, n: usize) -> Result<PhiDeltaBound> {
    if n < 2 {
        return Err(Error::DegreeTooSmall { n, min: 2 });
    }
    let m_samples = sample_min(phi, n - 1)?;
    let m = continuum_min(phi).min(m_samples);
    if m <= 0.0 {
        return Err(Error::Domain { value: m, domain: "phi strictly positive on [0, 1]" });
    }
    let omega1 = modulus1(phi, 1.0 / (n - 1) as f64, None)?;
    let tail = 1.0 / n as f64;
    Ok(PhiDeltaBound {
        n,
        value: omega1.value / (2.0 * m) + tail,
        m,
        value_sample_min: omega1.value / (2.0 * m_samples) + tail,
        m_samples,
        omega1,
    })
}

/// Node gap of the weights `gamma`, whether or not they satisfy (W).
pub fn raw_delta<T: Scalar>(gamma: &[T]) -> T {
    max_gap(&raw_nodes(gamma))
}

/// `(1 + sqrt(x(1-x))) omega_1(f, 1/sqrt(n) + omega_1(phi, 1/(n-1)) / (2m))`
/// for an operator whose weight polynomial is the Bernstein polynomial of `phi`.
pub fn bound_phi(
    op: &RationalBernsteinOperator<f64>,
    phi: &TargetFunction,
    f: &TargetFunction,
    x: f64,
) -> Result<BoundReport> {
    let n = op.n();
    let pd = phi_delta_bound(phi, n)?;
    let h = 1.0 / (n as f64).sqrt() + pd.omega1.value / (2.0 * pd.m);
    let observed = observed_error(op, f, x)?;
    let w = modulus1(f, h, None)?;
    let bound = (1.0 + (x * (1.0 - x)).sqrt()) * w.value;
    Ok(BoundReport::new(bound, observed, x, w.kind))
}

/// The older prefactor `1 + sqrt(max phi / min phi) / 2`, against which
/// `1 + sqrt(x(1-x))` never loses.
pub fn pisa_prefactor(phi: &TargetFunction) -> f64 {
    let max = (0..=MIN_SEARCH_POINTS)
        .map(|i| phi.eval(i as f64 / MIN_SEARCH_POINTS as f64))
        .fold(f64::NEG_INFINITY, f64::max);
    1.0 + 0.5 * (max / continuum_min(phi)).sqrt()
}
