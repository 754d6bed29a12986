use serde::{Deserialize, Serialize};

use crate::lp::{LpError, StandardLp};

/// A candidate primal/dual/reduced-cost triple for a standard-form problem.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PrimalDualIterate {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

/// Residual norms and gaps of an iterate against a standard-form problem.
///
/// `r_P = b - Ax`, `r_D = c - Aᵀy - z`, complementarity is `xᵀz / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub rp_inf: f64,
    pub rp_2: f64,
    pub rd_inf: f64,
    pub rd_2: f64,
    pub complementarity: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
}

impl ResidualReport {
    pub fn zero() -> Self {
        Self {
            rp_inf: 0.0,
            rp_2: 0.0,
            rd_inf: 0.0,
            rd_2: 0.0,
            complementarity: 0.0,
            abs_gap: 0.0,
            rel_gap: 0.0,
            primal_objective: 0.0,
            dual_objective: 0.0,
        }
    }

    /// Largest of the three relative quantities the PDHG criterion bounds.
    /// `combined ≤ ε` is equivalent to the PDHG termination test.
    pub fn combined_relative(&self, norms: NormPair) -> f64 {
        (self.rp_2 / (1.0 + norms.norm_b_2))
            .max(self.rd_2 / (1.0 + norms.norm_c_2))
            .max(self.rel_gap)
    }

    pub fn is_finite(&self) -> bool {
        [
            self.rp_2,
            self.rd_2,
            self.complementarity,
            self.abs_gap,
            self.rel_gap,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// `‖b‖₂` and `‖c‖₂`, used to make the 2-norm criteria relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormPair {
    pub norm_b_2: f64,
    pub norm_c_2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Simplex,
    InteriorPoint,
    Pdhg,
}

/// Termination rule family plus tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceProfile {
    algorithm: Algorithm,
    epsilon: f64,
}

impl ToleranceProfile {
    /// `None` unless `epsilon` is positive and finite.
    pub fn new(algorithm: Algorithm, epsilon: f64) -> Option<Self> {
        (epsilon > 0.0 && epsilon.is_finite()).then_some(Self { algorithm, epsilon })
    }

    /// The customary default tolerance for each algorithm:
    /// 1e-6 for simplex and PDHG, 1e-8 for interior point.
    pub fn default_for(algorithm: Algorithm) -> Self {
        let epsilon = match algorithm {
            Algorithm::Simplex | Algorithm::Pdhg => 1e-6,
            Algorithm::InteriorPoint => 1e-8,
        };
        Self { algorithm, epsilon }
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Computes the residual report of `it` against `p`.
pub fn residuals(p: &StandardLp, it: &PrimalDualIterate) -> Result<ResidualReport, LpError> {
    let (m, n) = (p.n_rows(), p.n_cols());
    for (what, expected, actual) in [
        ("iterate x", n, it.x.len()),
        ("iterate y", m, it.y.len()),
        ("iterate z", n, it.z.len()),
    ] {
        if expected != actual {
            return Err(LpError::Dimension {
                what,
                expected,
                actual,
            });
        }
    }
    let ax = p.matrix().matvec(&it.x)?;
    let aty = p.matrix().matvec_transpose(&it.y)?;

    let (mut rp_inf, mut rp_sq) = (0.0f64, 0.0f64);
    for (b, a) in p.rhs().iter().zip(&ax) {
        let r = b - a;
        rp_inf = rp_inf.max(r.abs());
        rp_sq += r * r;
    }
    let (mut rd_inf, mut rd_sq) = (0.0f64, 0.0f64);
    for ((c, a), z) in p.objective().iter().zip(&aty).zip(&it.z) {
        let r = c - a - z;
        rd_inf = rd_inf.max(r.abs());
        rd_sq += r * r;
    }
    let xz: f64 = it.x.iter().zip(&it.z).map(|(x, z)| x * z).sum();
    let complementarity = if n == 0 { 0.0 } else { xz / n as f64 };
    let primal_objective: f64 = p.objective().iter().zip(&it.x).map(|(c, x)| c * x).sum();
    let dual_objective: f64 = p.rhs().iter().zip(&it.y).map(|(b, y)| b * y).sum();
    let abs_gap = (primal_objective - dual_objective).abs();
    let rel_gap = abs_gap / (1.0 + primal_objective.abs() + dual_objective.abs());
    Ok(ResidualReport {
        rp_inf,
        rp_2: rp_sq.sqrt(),
        rd_inf,
        rd_2: rd_sq.sqrt(),
        complementarity,
        abs_gap,
        rel_gap,
        primal_objective,
        dual_objective,
    })
}

/// Applies the termination rule selected by `prof`.
///
/// * simplex: `‖r_P‖∞ ≤ ε` and `‖r_D‖∞ ≤ ε`
/// * interior point: `‖r_P‖₂ ≤ ε(1+‖b‖₂)`, `‖r_D‖₂ ≤ ε(1+‖c‖₂)`, `xᵀz/n ≤ ε`
/// * PDHG: the same two relative norms plus
///   `|cᵀx - bᵀy| ≤ ε(1 + |cᵀx| + |bᵀy|)`
pub fn check_termination(r: &ResidualReport, prof: ToleranceProfile, norms: NormPair) -> bool {
    let eps = prof.epsilon;
    let primal_rel = r.rp_2 <= eps * (1.0 + norms.norm_b_2);
    let dual_rel = r.rd_2 <= eps * (1.0 + norms.norm_c_2);
    match prof.algorithm {
        Algorithm::Simplex => r.rp_inf <= eps && r.rd_inf <= eps,
        Algorithm::InteriorPoint => primal_rel && dual_rel && r.complementarity <= eps,
        Algorithm::Pdhg => primal_rel && dual_rel && r.rel_gap <= eps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::SparseMatrix;

    fn norms0() -> NormPair {
        NormPair {
            norm_b_2: 0.0,
            norm_c_2: 0.0,
        }
    }

    #[test]
    fn zero_iterate() {
        let a = SparseMatrix::from_dense(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        let p = StandardLp::new(a, vec![3.0, 4.0], vec![1.0, 1.0]).unwrap();
        let it = PrimalDualIterate {
            x: vec![0.0; 2],
            y: vec![0.0; 2],
            z: vec![1.0, 1.0],
        };
        let r = residuals(&p, &it).unwrap();
        assert_eq!(r.rp_2, 5.0);
        assert_eq!(r.rd_2, 0.0);
        assert_eq!(r.complementarity, 0.0);
    }

    #[test]
    fn one_by_one_optimum() {
        let a = SparseMatrix::from_dense(1, 1, &[2.0]).unwrap();
        let p = StandardLp::new(a, vec![4.0], vec![1.0]).unwrap();
        let it = PrimalDualIterate {
            x: vec![2.0],
            y: vec![0.5],
            z: vec![0.0],
        };
        let r = residuals(&p, &it).unwrap();
        assert_eq!(r.rp_inf, 0.0);
        assert_eq!(r.rd_inf, 0.0);
        assert_eq!(r.abs_gap, 0.0);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let p = StandardLp::new(SparseMatrix::identity(2), vec![1.0; 2], vec![1.0; 2]).unwrap();
        let it = PrimalDualIterate {
            x: vec![0.0; 3],
            y: vec![0.0; 2],
            z: vec![0.0; 2],
        };
        assert!(matches!(residuals(&p, &it), Err(LpError::Dimension { .. })));
    }

    #[test]
    fn zero_residuals_terminate_for_every_profile() {
        let r = ResidualReport::zero();
        for alg in [
            Algorithm::Simplex,
            Algorithm::InteriorPoint,
            Algorithm::Pdhg,
        ] {
            assert!(check_termination(
                &r,
                ToleranceProfile::default_for(alg),
                norms0()
            ));
        }
    }

    #[test]
    fn single_violated_clause_fails() {
        let norms = NormPair {
            norm_b_2: 3.0,
            norm_c_2: 1.0,
        };
        let r = ResidualReport {
            rp_2: 2e-6 * 4.0,
            rp_inf: 2e-6 * 4.0,
            ..ResidualReport::zero()
        };
        let prof = ToleranceProfile::new(Algorithm::Pdhg, 1e-6).unwrap();
        assert!(!check_termination(&r, prof, norms));
    }

    #[test]
    fn simplex_traditional_tolerance() {
        let r = ResidualReport {
            rp_inf: 9e-7,
            rd_inf: 9e-7,
            rp_2: 9e-7,
            rd_2: 9e-7,
            ..ResidualReport::zero()
        };
        let prof = ToleranceProfile::default_for(Algorithm::Simplex);
        assert_eq!(prof.epsilon(), 1e-6);
        assert!(check_termination(&r, prof, norms0()));
    }

    #[test]
    fn epsilon_must_be_positive() {
        assert!(ToleranceProfile::new(Algorithm::Pdhg, 0.0).is_none());
        assert!(ToleranceProfile::new(Algorithm::Pdhg, -1.0).is_none());
        assert!(ToleranceProfile::new(Algorithm::Pdhg, f64::NAN).is_none());
    }
}
