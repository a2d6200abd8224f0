//! Voronovskaja ratios and the fourth-to-second moment ratio.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{central_moment, fourth_moment_factor, monomial_moment};
use crate::operator::RationalBernsteinOperator;
use crate::target::TargetFunction;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoronovskajaSample {
    pub n: usize,
    pub x: f64,
    /// `(R_n f(x) - f(x)) / M_2(x)`.
    pub ratio: f64,
    /// `f''(x) / 2`.
    pub target: f64,
    /// `M_4(x) / M_2(x)`.
    pub mamedov: f64,
    /// `Delta_n (6x^2 - 15x + 12 + Delta_n)`, an upper bound for `mamedov`.
    pub mamedov_cap: f64,
}

fn check_interior(x: f64) -> Result<()> {
    if x == 0.0 || x == 1.0 {
        Err(Error::DegeneratePoint(x))
    } else if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain { value: x, domain: "[0, 1]" })
    }
}

pub fn voronovskaja_sample(
    op: &RationalBernsteinOperator<f64>,
    f: &TargetFunction,
    x: f64,
) -> Result<VoronovskajaSample> {
    let d2 = f
        .second_derivative(x)
        .ok_or_else(|| Error::MissingSecondDerivative(f.label().to_string()))?;
    check_interior(x)?;
    let m2 = central_moment(op, 2, &x)?;
    // Direct summation loses digits to cancellation where M_2 is small.
    let deviation = match f.monomial_degree() {
        Some(0) => 0.0,
        Some(s) => monomial_moment(op, s as usize, &x)?,
        None => op.apply_deviation(|t| f.eval(*t), &x)?,
    };
    Ok(VoronovskajaSample {
        n: op.n(),
        x,
        ratio: deviation / m2,
        target: d2 / 2.0,
        mamedov: central_moment(op, 4, &x)? / m2,
        mamedov_cap: mamedov_cap(op, x),
    })
}

/// `M_4(x) / M_2(x)`.
pub fn mamedov_ratio(op: &RationalBernsteinOperator<f64>, x: f64) -> Result<f64> {
    check_interior(x)?;
    Ok(central_moment(op, 4, &x)? / central_moment(op, 2, &x)?)
}

pub fn mamedov_cap(op: &RationalBernsteinOperator<f64>, x: f64) -> f64 {
    let delta = op.delta_n();
    delta * (fourth_moment_factor(&x) + delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::unit_grid;
    use crate::operator::NodeSequence;

    fn sqrt_nodes(n: usize) -> RationalBernsteinOperator<f64> {
        let x = (0..=n).map(|k| (k as f64 / n as f64).sqrt()).collect();
        RationalBernsteinOperator::from_nodes(NodeSequence::new(x).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn e2_ratio_is_one() {
        let e2 = TargetFunction::monomial(2);
        for op in [sqrt_nodes(7), sqrt_nodes(64), RationalBernsteinOperator::classical(12).unwrap()] {
            for x in unit_grid(1001).into_iter().filter(|x| *x > 0.0 && *x < 1.0) {
                let s = voronovskaja_sample(&op, &e2, x).unwrap();
                assert!((s.ratio - 1.0).abs() < 1e-12);
                assert_eq!(s.target, 1.0);
            }
        }
    }

    #[test]
    fn e3_ratio_within_sandwich() {
        let e3 = TargetFunction::monomial(3);
        let op = sqrt_nodes(64);
        let s = voronovskaja_sample(&op, &e3, 0.5).unwrap();
        assert!((0.0..=3.0).contains(&s.ratio));
        assert!((s.target - 1.5).abs() < 1e-15);
    }

    #[test]
    fn classical_exp_converges() {
        let op = RationalBernsteinOperator::<f64>::classical(256).unwrap();
        let s = voronovskaja_sample(&op, &TargetFunction::exp(), 0.5).unwrap();
        assert!((s.ratio - 0.5f64.exp() / 2.0).abs() <= 0.02);
    }

    #[test]
    fn endpoints_and_missing_derivative() {
        let op = RationalBernsteinOperator::<f64>::classical(5).unwrap();
        let e2 = TargetFunction::monomial(2);
        assert_eq!(voronovskaja_sample(&op, &e2, 0.0), Err(Error::DegeneratePoint(0.0)));
        assert_eq!(mamedov_ratio(&op, 1.0), Err(Error::DegeneratePoint(1.0)));
        let abs = TargetFunction::corpus("abs_half").unwrap();
        assert!(matches!(
            voronovskaja_sample(&op, &abs, 0.5),
            Err(Error::MissingSecondDerivative(_))
        ));
    }

    #[test]
    fn mamedov_examples() {
        let b10 = RationalBernsteinOperator::<f64>::classical(10).unwrap();
        assert!((mamedov_ratio(&b10, 0.5).unwrap() - 0.07).abs() < 1e-14);

        let op = sqrt_nodes(64);
        assert_eq!(op.delta_n(), 0.125);
        assert!(mamedov_ratio(&op, 0.5).unwrap() <= 0.125 * 6.25 + 0.125 * 0.125);

        for x in unit_grid(99).into_iter().filter(|x| *x >= 0.01 && *x <= 0.99) {
            for op in [&b10, &op] {
                let r = mamedov_ratio(op, x).unwrap();
                assert!(r >= 0.0 && r <= mamedov_cap(op, x) + 1e-10);
            }
        }
    }

    #[test]
    fn sqrt_nodes_trend() {
        let ns = [16usize, 64, 256];
        for f in [TargetFunction::monomial(3), TargetFunction::exp(), TargetFunction::corpus("sin_pi").unwrap()] {
            let samples: Vec<_> = ns
                .iter()
                .map(|&n| voronovskaja_sample(&sqrt_nodes(n), &f, 0.5).unwrap())
                .collect();
            for w in samples.windows(2) {
                let (a, b) = ((w[0].ratio - w[0].target).abs(), (w[1].ratio - w[1].target).abs());
                assert!(b <= 1.1 * a + 1e-12, "{}: {a} -> {b}", f.label());
                assert!(w[1].mamedov < w[0].mamedov);
            }
        }
    }
}
