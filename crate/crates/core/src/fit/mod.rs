//! Power-law regression in log-log space and alternative functional fits.
//!
//! `seconds ≈ a · nnz^b` is fitted by ordinary least squares on
//! `(ln nnz, ln seconds)`. The exponent gets a 95% interval from the t
//! distribution with `n − 2` degrees of freedom. R² for the power law is
//! reported in log space; the alternatives report R² against raw seconds.

mod alt;
mod tdist;

pub use alt::{fit_alternatives, AltFit, AltKind, CONDITION_LIMIT};
pub use tdist::{inc_beta, ln_gamma, student_t_cdf, student_t_quantile};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum number of points for [`fit_power_law`].
pub const MIN_POWER_LAW_POINTS: usize = 3;

/// R² (log space) a fit must strictly exceed to be called effective.
pub const EFFECTIVE_R2: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub nnz: f64,
    pub seconds: f64,
}

impl FitPoint {
    pub fn new(nnz: f64, seconds: f64) -> Self {
        Self { nnz, seconds }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("all points share the same nnz")]
    DegenerateAbscissa,
    #[error("point {index} is not strictly positive and finite")]
    NonPositive { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    pub b_ci: (f64, f64),
    pub se_b: f64,
    pub r2_log: f64,
    /// R² of `a · nnz^b` against raw seconds.
    pub r2_native: f64,
    pub n_points: usize,
    /// Every response was identical, so R² is 1 by convention.
    pub constant_response: bool,
}

impl PowerLawFit {
    pub fn predict(&self, nnz: f64) -> f64 {
        self.a * nnz.powf(self.b)
    }
}

/// Simple linear regression of `y` on `x`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ols {
    pub slope: f64,
    pub intercept: f64,
    pub sxx: f64,
    pub sse: f64,
    pub sst: f64,
}

/// One pass with Welford-style co-moment updates.
pub(crate) fn ols(xs: &[f64], ys: &[f64]) -> Ols {
    let (mut mx, mut my) = (0.0, 0.0);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (k, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        let n = (k + 1) as f64;
        let dx = x - mx;
        let dy = y - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (x - mx);
        sxy += dx * (y - my);
        syy += dy * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let sse = (syy - slope * sxy).max(0.0);
    Ols {
        slope,
        intercept: my - slope * mx,
        sxx,
        sse,
        sst: syy,
    }
}

pub(crate) fn r_squared(sse: f64, sst: f64) -> f64 {
    if sst > 0.0 {
        1.0 - sse / sst
    } else if sse == 0.0 {
        1.0
    } else {
        f64::NEG_INFINITY
    }
}

pub(crate) fn check_points(points: &[FitPoint], needed: usize) -> Result<(), FitError> {
    if points.len() < needed {
        return Err(FitError::InsufficientData {
            needed,
            got: points.len(),
        });
    }
    for (index, p) in points.iter().enumerate() {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(p.nnz) || !ok(p.seconds) {
            return Err(FitError::NonPositive { index });
        }
    }
    Ok(())
}

/// Residual sum of squares of `pred` against `obs`, and the total sum of
/// squares of `obs`.
pub(crate) fn sums_of_squares(obs: &[f64], pred: &[f64]) -> (f64, f64) {
    let mean = obs.iter().sum::<f64>() / obs.len() as f64;
    let sse = obs.iter().zip(pred).map(|(o, p)| (o - p).powi(2)).sum();
    let sst = obs.iter().map(|o| (o - mean).powi(2)).sum();
    (sse, sst)
}

/// OLS fit of `ln seconds = ln a + b · ln nnz`.
pub fn fit_power_law(points: &[FitPoint]) -> Result<PowerLawFit, FitError> {
    check_points(points, MIN_POWER_LAW_POINTS)?;
    let xs: Vec<f64> = points.iter().map(|p| p.nnz.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.seconds.ln()).collect();
    let fit = ols(&xs, &ys);
    // relative test: the co-moment of identical values may round to a tiny
    // positive number
    let spread = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - xs.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread == 0.0 || fit.sxx <= 0.0 {
        return Err(FitError::DegenerateAbscissa);
    }
    let n = points.len();
    let constant_response = ys.iter().all(|&y| y == ys[0]);
    let (b, sse) = if constant_response {
        (0.0, 0.0)
    } else {
        (fit.slope, fit.sse)
    };
    let ln_a = if constant_response {
        ys[0]
    } else {
        fit.intercept
    };
    let se_b = (sse / ((n - 2) as f64 * fit.sxx)).sqrt();
    let t = student_t_quantile((n - 2) as u64, 0.975);
    let half = t * se_b;
    let r2_log = if constant_response {
        1.0
    } else {
        r_squared(sse, fit.sst)
    };
    let a = ln_a.exp();
    let obs: Vec<f64> = points.iter().map(|p| p.seconds).collect();
    let pred: Vec<f64> = points.iter().map(|p| a * p.nnz.powf(b)).collect();
    let (sse_n, sst_n) = sums_of_squares(&obs, &pred);
    Ok(PowerLawFit {
        a,
        b,
        b_ci: (b - half, b + half),
        se_b,
        r2_log,
        r2_native: r_squared(sse_n, sst_n),
        n_points: n,
        constant_response,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitQuality {
    Effective,
    Weak,
}

impl FitQuality {
    pub fn label(self) -> &'static str {
        match self {
            FitQuality::Effective => "effective",
            FitQuality::Weak => "weak — exponent unreliable",
        }
    }
}

pub fn classify_r2(r2_log: f64) -> FitQuality {
    if r2_log > EFFECTIVE_R2 {
        FitQuality::Effective
    } else {
        FitQuality::Weak
    }
}

pub fn classify_fit(fit: &PowerLawFit) -> FitQuality {
    classify_r2(fit.r2_log)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(data: &[(f64, f64)]) -> Vec<FitPoint> {
        data.iter().map(|&(n, s)| FitPoint::new(n, s)).collect()
    }

    #[test]
    fn exact_power_law() {
        let p = pts(&[
            (10.0, 2.0 * 10f64.powf(1.5)),
            (100.0, 2000.0),
            (1000.0, 2.0 * 1000f64.powf(1.5)),
        ]);
        let f = fit_power_law(&p).unwrap();
        assert!((f.b - 1.5).abs() < 1e-12);
        assert!((f.a - 2.0).abs() < 1e-10);
        assert!((f.r2_log - 1.0).abs() < 1e-12);
        assert!((f.b_ci.1 - f.b_ci.0).abs() < 1e-6);
    }

    #[test]
    fn constant_response_convention() {
        let f = fit_power_law(&pts(&[(10.0, 3.0), (50.0, 3.0), (90.0, 3.0)])).unwrap();
        assert_eq!(f.b, 0.0);
        assert_eq!(f.r2_log, 1.0);
        assert!(f.constant_response);
        assert_eq!(f.b_ci, (0.0, 0.0));
    }

    #[test]
    fn errors() {
        assert_eq!(
            fit_power_law(&pts(&[(1.0, 1.0), (2.0, 2.0)])),
            Err(FitError::InsufficientData { needed: 3, got: 2 })
        );
        assert_eq!(
            fit_power_law(&pts(&[(5.0, 1.0), (5.0, 2.0), (5.0, 3.0)])),
            Err(FitError::DegenerateAbscissa)
        );
        assert_eq!(
            fit_power_law(&pts(&[(5.0, 1.0), (6.0, 0.0), (7.0, 3.0)])),
            Err(FitError::NonPositive { index: 1 })
        );
    }

    #[test]
    fn threshold_is_strict() {
        assert_eq!(classify_r2(0.71), FitQuality::Effective);
        assert_eq!(classify_r2(0.70), FitQuality::Weak);
        assert_eq!(classify_r2(0.26), FitQuality::Weak);
        assert_eq!(FitQuality::Weak.label(), "weak — exponent unreliable");
    }
}
