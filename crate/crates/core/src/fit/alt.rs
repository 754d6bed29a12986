use super::{check_points, r_squared, sums_of_squares, FitError, FitPoint};
use serde::{Deserialize, Serialize};

/// Normal-equation condition estimates above this are flagged.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AltKind {
    Poly2,
    Poly3,
    Exponential,
    Logarithmic,
}

impl AltKind {
    pub fn name(self) -> &'static str {
        match self {
            AltKind::Poly2 => "poly2",
            AltKind::Poly3 => "poly3",
            AltKind::Exponential => "exponential",
            AltKind::Logarithmic => "logarithmic",
        }
    }

    /// Points needed: two more than the number of coefficients, and never
    /// fewer than four.
    pub fn min_points(self) -> usize {
        match self {
            AltKind::Poly3 => 5,
            _ => 4,
        }
    }
}

/// A non-power-law fit.
///
/// Coefficients are in raw units:
/// - poly2/poly3: `[c0, c1, c2, (c3)]` for `Σ c_k nnz^k`
/// - exponential: `[a, b]` for `a · e^(b · nnz)`
/// - logarithmic: `[a, b]` for `a + b · ln nnz`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AltFit {
    pub kind: AltKind,
    pub coefficients: Vec<f64>,
    /// Against raw seconds.
    pub r2: f64,
    /// Against ln seconds; `None` when some prediction is not positive.
    pub r2_log: Option<f64>,
    pub condition: f64,
    pub diagnostic: Option<String>,
}

impl AltFit {
    pub fn predict(&self, nnz: f64) -> f64 {
        let c = &self.coefficients;
        match self.kind {
            AltKind::Poly2 | AltKind::Poly3 => c.iter().rev().fold(0.0, |acc, &ck| acc * nnz + ck),
            AltKind::Exponential => c[0] * (c[1] * nnz).exp(),
            AltKind::Logarithmic => c[0] + c[1] * nnz.ln(),
        }
    }

    pub fn ill_conditioned(&self) -> bool {
        self.diagnostic.is_some()
    }
}

/// Least squares by Householder QR on column-equilibrated data. Returns the
/// coefficients and `cond(R)²` as a normal-equation condition estimate.
fn lstsq(cols: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let m = y.len();
    let k = cols.len();
    let scale: Vec<f64> = cols
        .iter()
        .map(|c| {
            let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 0.0 {
                n
            } else {
                1.0
            }
        })
        .collect();
    // column-major working copy
    let mut a: Vec<Vec<f64>> = cols
        .iter()
        .zip(&scale)
        .map(|(c, s)| c.iter().map(|v| v / s).collect())
        .collect();
    let mut rhs = y.to_vec();
    for j in 0..k {
        let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        if vv == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(j) {
            let dot: f64 = v.iter().zip(&col[j..]).map(|(p, q)| p * q).sum();
            let f = 2.0 * dot / vv;
            col[j..].iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
        }
        let dot: f64 = v.iter().zip(&rhs[j..]).map(|(p, q)| p * q).sum();
        let f = 2.0 * dot / vv;
        rhs[j..].iter_mut().zip(&v).for_each(|(c, vi)| *c -= f * vi);
    }
    let diag: Vec<f64> = (0..k.min(m)).map(|j| a[j][j].abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if dmin > 0.0 {
        (dmax / dmin).powi(2)
    } else {
        f64::INFINITY
    };
    let mut beta = vec![0.0; k];
    for j in (0..k.min(m)).rev() {
        if diag[j] <= f64::EPSILON * dmax {
            continue;
        }
        let s: f64 = (j + 1..k).map(|i| a[i][j] * beta[i]).sum();
        beta[j] = (rhs[j] - s) / a[j][j];
    }
    for (b, s) in beta.iter_mut().zip(&scale) {
        *b /= s;
    }
    (beta, cond)
}

fn finish(kind: AltKind, coefficients: Vec<f64>, condition: f64, points: &[FitPoint]) -> AltFit {
    let mut fit = AltFit {
        kind,
        coefficients,
        r2: 0.0,
        r2_log: None,
        condition,
        diagnostic: None,
    };
    if condition > CONDITION_LIMIT || fit.coefficients.iter().any(|c| !c.is_finite()) {
        fit.diagnostic = Some(format!(
            "{}: condition estimate {condition:.3e} exceeds {CONDITION_LIMIT:.0e}",
            kind.name()
        ));
        fit.coefficients.iter_mut().for_each(|c| {
            if !c.is_finite() {
                *c = 0.0
            }
        });
    }
    let obs: Vec<f64> = points.iter().map(|p| p.seconds).collect();
    let pred: Vec<f64> = points.iter().map(|p| fit.predict(p.nnz)).collect();
    let (sse, sst) = sums_of_squares(&obs, &pred);
    fit.r2 = r_squared(sse, sst);
    if pred.iter().all(|&v| v > 0.0 && v.is_finite()) {
        let lo: Vec<f64> = obs.iter().map(|v| v.ln()).collect();
        let lp: Vec<f64> = pred.iter().map(|v| v.ln()).collect();
        let (sse, sst) = sums_of_squares(&lo, &lp);
        fit.r2_log = Some(r_squared(sse, sst));
    }
    fit
}

fn poly(points: &[FitPoint], degree: usize, kind: AltKind) -> AltFit {
    // work in u = nnz / max nnz so the Vandermonde columns stay bounded
    let xmax = points.iter().map(|p| p.nnz).fold(0.0, f64::max);
    let cols: Vec<Vec<f64>> = (0..=degree)
        .map(|k| {
            points
                .iter()
                .map(|p| (p.nnz / xmax).powi(k as i32))
                .collect()
        })
        .collect();
    let y: Vec<f64> = points.iter().map(|p| p.seconds).collect();
    let (beta, cond) = lstsq(&cols, &y);
    let coef = beta
        .iter()
        .enumerate()
        .map(|(k, b)| b / xmax.powi(k as i32))
        .collect();
    finish(kind, coef, cond, points)
}

fn two_column(
    points: &[FitPoint],
    x: impl Fn(&FitPoint) -> f64,
    y: impl Fn(&FitPoint) -> f64,
) -> (Vec<f64>, f64) {
    let cols = vec![vec![1.0; points.len()], points.iter().map(x).collect()];
    let ys: Vec<f64> = points.iter().map(y).collect();
    lstsq(&cols, &ys)
}

/// Fits every alternative the point count allows: poly2, exponential and
/// logarithmic need 4 points, poly3 needs 5.
pub fn fit_alternatives(points: &[FitPoint]) -> Result<Vec<AltFit>, FitError> {
    check_points(points, 4)?;
    let mut out = vec![poly(points, 2, AltKind::Poly2)];
    if points.len() >= AltKind::Poly3.min_points() {
        out.push(poly(points, 3, AltKind::Poly3));
    }
    let (b, cond) = two_column(points, |p| p.nnz, |p| p.seconds.ln());
    out.push(finish(
        AltKind::Exponential,
        vec![b[0].exp(), b[1]],
        cond,
        points,
    ));
    let (b, cond) = two_column(points, |p| p.nnz.ln(), |p| p.seconds);
    out.push(finish(AltKind::Logarithmic, b, cond, points));
    Ok(out)
}
