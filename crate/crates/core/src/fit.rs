//! Ordinary least-squares line fits used by the convergence and decay checks.

use crate::error::{Result, ZenoError};

/// Result of fitting `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual.
    pub max_residual: f64,
    /// `max_residual` divided by the spread of the fitted values over the
    /// sample range; zero for a perfect line.
    pub relative_residual: f64,
    pub points: usize,
}

impl LineFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Least-squares line through `(x, y)`; needs two distinct abscissae and
/// finite data.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() {
        return Err(ZenoError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(ZenoError::InvalidParameter("a line fit needs at least 2 points".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(ZenoError::InvalidParameter("non-finite sample in line fit".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ZenoError::InvalidParameter("line fit abscissae are all equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    let max_residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).abs())
        .fold(0.0, f64::max);
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let spread = (slope * (hi - lo)).abs();
    let relative_residual = if spread > 0.0 {
        max_residual / spread
    } else if max_residual == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(LineFit {
        slope,
        intercept,
        max_residual,
        relative_residual,
        points: x.len(),
    })
}

/// Fit of `ln y` against `x` (exponential law).
pub fn fit_log_linear(x: &[f64], y: &[f64]) -> Result<LineFit> {
    fit_line(x, &ln_all(y)?)
}

/// Fit of `ln y` against `ln x` (power law).
pub fn fit_log_log(x: &[f64], y: &[f64]) -> Result<LineFit> {
    fit_line(&ln_all(x)?, &ln_all(y)?)
}

fn ln_all(v: &[f64]) -> Result<Vec<f64>> {
    v.iter()
        .map(|&s| {
            if s > 0.0 {
                Ok(s.ln())
            } else {
                Err(ZenoError::InvalidParameter(format!(
                    "logarithmic fit needs positive samples, got {s}"
                )))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let f = fit_line(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15);
        assert!((f.intercept + 1.0).abs() < 1e-15);
        assert!(f.relative_residual < 1e-15);
        assert!((f.predict(10.0) - 19.0).abs() < 1e-13);
    }

    #[test]
    fn power_law() {
        let x: Vec<f64> = (1..=10).map(|i| i as f64 * 3.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 5.0 * v.powf(-2.0)).collect();
        let f = fit_log_log(&x, &y).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
        assert!((f.intercept - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn noisy_residual_is_reported() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 1.5, 2.0];
        let f = fit_line(&x, &y).unwrap();
        assert!(f.relative_residual > 0.1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_line(&[1.0], &[1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(fit_line(&[1.0, 2.0], &[1.0]).is_err());
        assert!(fit_log_linear(&[1.0, 2.0], &[1.0, 0.0]).is_err());
    }
}
