//! Least-squares power-law fits on log-log data.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFit {
    pub parameters: Vec<f64>,
    pub values: Vec<f64>,
    pub fitted_exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl SweepFit {
    /// Fits `values ≈ C · parameters^p`. Needs at least four positive points.
    pub fn fit(parameters: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if parameters.len() != values.len() || parameters.len() < 4 {
            return Err(Error::InvalidParameter(format!(
                "a sweep needs ≥ 4 paired points, got {} and {}",
                parameters.len(),
                values.len()
            )));
        }
        if parameters.iter().chain(&values).any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter("sweep data must be positive and finite".into()));
        }
        let xs: Vec<f64> = parameters.iter().map(|p| p.ln()).collect();
        let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        if sxx == 0.0 {
            return Err(Error::InvalidParameter("sweep parameters are all equal".into()));
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        // A flat response is a perfect fit of slope zero.
        let r_squared = if syy <= 1e-30 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) };
        Ok(Self { parameters, values, fitted_exponent: slope, intercept, r_squared })
    }

    /// Decades spanned by the parameters.
    pub fn decades(&self) -> f64 {
        let lo = self.parameters.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.parameters.iter().copied().fold(0.0, f64::max);
        (hi / lo).log10()
    }

    /// Largest over smallest value.
    pub fn spread(&self) -> f64 {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(0.0, f64::max);
        hi / lo
    }
}

/// `n` points geometrically spaced from `lo` to `hi` inclusive.
pub fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).powf(1.0 / (n as f64 - 1.0));
    (0..n).map(|i| if i + 1 == n { hi } else { lo * ratio.powi(i as i32) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let p = geometric(1.0, 1000.0, 7);
        let v: Vec<f64> = p.iter().map(|x| 3.0 * x.powf(-0.75)).collect();
        let fit = SweepFit::fit(p, v).unwrap();
        assert!((fit.fitted_exponent + 0.75).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit.r_squared > 0.999_999);
        assert!((fit.decades() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_short_or_nonpositive_data() {
        assert!(SweepFit::fit(vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(SweepFit::fit(vec![1.0, 2.0, 3.0, 4.0], vec![1.0, -1.0, 1.0, 1.0]).is_err());
        let flat = SweepFit::fit(vec![1.0, 2.0, 3.0, 4.0], vec![2.0; 4]).unwrap();
        assert_eq!((flat.fitted_exponent, flat.r_squared), (0.0, 1.0));
    }
}
