//! Closed-form predictors and Monte Carlo aggregation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Denominator floor for relative errors.
pub const RELATIVE_ERROR_FLOOR: f64 = 1e-12;

/// A predicted quantity next to its measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub quantity: String,
    pub predicted: f64,
    pub measured: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Prediction {
    pub fn new(quantity: impl Into<String>, predicted: f64, measured: f64, tolerance: f64) -> Self {
        let relative_error = relative_error(measured, predicted);
        Self {
            quantity: quantity.into(),
            predicted,
            measured,
            relative_error,
            tolerance,
            pass: relative_error <= tolerance,
        }
    }
}

pub fn relative_error(measured: f64, predicted: f64) -> f64 {
    (measured - predicted).abs() / predicted.abs().max(RELATIVE_ERROR_FLOOR)
}

/// Expected number of degree-`d` vertices in G(n, c/n): e^{-c} c^d / d! · n.
pub fn predict_degree_count(d: usize, c: f64, n: usize) -> f64 {
    let mut term = (-c).exp();
    for k in 1..=d {
        term *= c / k as f64;
    }
    term * n as f64
}

/// The unique x ∈ (0, 1) with x e^{-x} = c e^{-c}, for c > 1.
///
/// x e^{-x} is strictly increasing on (0, 1) but very flat near 0 when the
/// target is tiny, so plain bisection is used.
pub fn solve_two_core_x(c: f64) -> Result<f64> {
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::Domain(c));
    }
    let target = c * (-c).exp();
    let f = |x: f64| x * (-x).exp() - target;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if f(lo).abs() <= f(hi).abs() { lo } else { hi })
}

/// (1 − x)(1 − x/c)·n, the asymptotic size of the connected 2-core.
pub fn predict_two_core_size(c: f64, n: usize) -> Result<f64> {
    let x = solve_two_core_x(c)?;
    Ok((1.0 - x) * (1.0 - x / c) * n as f64)
}

/// One named measurement inside a trial report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub quantity: String,
    pub value: f64,
    /// Outcome of the associated check, if the quantity has one.
    pub passed: Option<bool>,
}

impl Observation {
    pub fn new(quantity: impl Into<String>, value: f64) -> Self {
        Self {
            quantity: quantity.into(),
            value,
            passed: None,
        }
    }

    pub fn checked(quantity: impl Into<String>, value: f64, passed: bool) -> Self {
        Self {
            quantity: quantity.into(),
            value,
            passed: Some(passed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantitySummary {
    pub quantity: String,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (0 for a single observation).
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    /// Fraction of checked observations that passed; `None` if unchecked.
    pub pass_rate: Option<f64>,
}

/// Aggregates trial reports quantity by quantity, in order of first
/// appearance.
pub fn aggregate_trials(reports: &[Vec<Observation>]) -> Result<Vec<QuantitySummary>> {
    if reports.is_empty() {
        return Err(Error::Argument("cannot aggregate zero reports".into()));
    }
    let mut order: Vec<&str> = Vec::new();
    for obs in reports.iter().flatten() {
        if !order.contains(&obs.quantity.as_str()) {
            order.push(&obs.quantity);
        }
    }
    Ok(order
        .into_iter()
        .map(|name| {
            let matching: Vec<&Observation> = reports
                .iter()
                .flatten()
                .filter(|o| o.quantity == name)
                .collect();
            let values: Vec<f64> = matching.iter().map(|o| o.value).collect();
            let count = values.len();
            let mean = values.iter().sum::<f64>() / count as f64;
            let std_dev = if count > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
            } else {
                0.0
            };
            let checked: Vec<bool> = matching.iter().filter_map(|o| o.passed).collect();
            let pass_rate = (!checked.is_empty())
                .then(|| checked.iter().filter(|&&p| p).count() as f64 / checked.len() as f64);
            QuantitySummary {
                quantity: name.to_string(),
                count,
                mean,
                std_dev,
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                pass_rate,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_count_examples() {
        let n = 1_000_000;
        assert!((predict_degree_count(0, 1.0, n) - (-1.0f64).exp() * n as f64).abs() < 1e-6);
        assert!((predict_degree_count(1, 6.0, 100_000) - 1487.2513).abs() < 1e-3);
        assert!((predict_degree_count(2, 2.0, 100) - 27.0671).abs() < 1e-3);
    }

    #[test]
    fn degree_counts_sum_to_n() {
        for c in [0.5f64, 3.0, 8.0, 15.0] {
            let total: f64 = (0..=(10.0 * c).ceil() as usize + 20)
                .map(|d| predict_degree_count(d, c, 1000))
                .sum();
            assert!((total - 1000.0).abs() < 1e-9, "c = {c}: {total}");
        }
    }

    #[test]
    fn two_core_root() {
        assert!(solve_two_core_x(1.0).is_err());
        assert!(solve_two_core_x(0.5).is_err());
        assert!(solve_two_core_x(1.0001).unwrap() > 0.98);
        let x = solve_two_core_x(6.0).unwrap();
        // Two terms of the expansion leave a 1.5c³e^{-3c} remainder, about 3e-4
        // relative at c = 6; the third term brings it under 1e-5.
        let t = 6.0 * (-6.0f64).exp();
        let two_terms = t + t * t;
        assert!(
            (x - two_terms).abs() / two_terms < 1e-3,
            "{x} vs {two_terms}"
        );
        let three_terms = two_terms + 1.5 * t.powi(3);
        assert!(
            (x - three_terms).abs() / three_terms < 1e-5,
            "{x} vs {three_terms}"
        );
        let mut c = 1.5;
        while c <= 30.0 {
            let x = solve_two_core_x(c).unwrap();
            assert!(x > 0.0 && x < 1.0);
            assert!((x * (-x).exp() - c * (-c).exp()).abs() <= 1e-12, "c = {c}");
            c += 0.5;
        }
    }

    #[test]
    fn two_core_asymptotic_error_shrinks() {
        let scaled = |c: f64| {
            let x = solve_two_core_x(c).unwrap();
            (x - (c * (-c).exp() + c * c * (-2.0 * c).exp())).abs() / (-2.0 * c).exp()
        };
        let mut previous = f64::INFINITY;
        for c in [5.0, 6.0, 8.0, 10.0, 12.0, 15.0, 20.0] {
            let s = scaled(c);
            assert!(s < previous, "c = {c}");
            previous = s;
        }
    }

    #[test]
    fn two_core_size() {
        assert_eq!(predict_two_core_size(6.0, 0).unwrap(), 0.0);
        let c: f64 = 20.0;
        let lower = 1.0 - (c + 1.0) * (-c).exp() - 2.0 * c * c * (-2.0 * c).exp();
        assert!(predict_two_core_size(c, 1).unwrap() >= lower);
        assert!(predict_two_core_size(0.9, 10).is_err());
    }

    #[test]
    fn aggregation() {
        assert!(aggregate_trials(&[]).is_err());
        let single = aggregate_trials(&[vec![Observation::new("mu", 4.0)]]).unwrap();
        assert_eq!(single[0].mean, 4.0);
        assert_eq!(single[0].std_dev, 0.0);
        let two = aggregate_trials(&[
            vec![Observation::checked("mu", 1.0, true)],
            vec![Observation::checked("mu", 3.0, false)],
        ])
        .unwrap();
        assert_eq!(two[0].mean, 2.0);
        assert_eq!((two[0].min, two[0].max), (1.0, 3.0));
        assert_eq!(two[0].pass_rate, Some(0.5));
    }

    #[test]
    fn prediction_relative_error() {
        let p = Prediction::new("v1", 100.0, 98.0, 0.05);
        assert!((p.relative_error - 0.02).abs() < 1e-12);
        assert!(p.pass);
        let p = Prediction::new("zero", 0.0, 1e-13, 0.5);
        assert!((p.relative_error - 0.1).abs() < 1e-9);
    }
}
