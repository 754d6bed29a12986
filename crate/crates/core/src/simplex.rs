//! Dense two-phase primal simplex with Bland's rule.
//!
//! Meant as a ground-truth oracle on small problems: every pivot touches the
//! whole tableau, and the final basic solution is recomputed from a fresh LU
//! factorization of the basis so the reported residuals do not carry the
//! tableau's accumulated rounding.

use thiserror::Error;

use crate::lp::{
    residuals, LpError, LpProblem, PrimalDualIterate, ResidualReport, RowMap, StandardFormOptions,
    StandardLp,
};

/// Largest standard-form column count accepted.
pub const MAX_STANDARD_COLS: usize = 2000;

const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    Infeasible,
    Unbounded,
    PivotLimit,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("standard form has {0} columns, above the limit of {MAX_STANDARD_COLS}")]
    TooLarge(usize),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Outcome of [`solve_dense_simplex`].
#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub status: SimplexStatus,
    /// Primal point in the original variables.
    pub x: Vec<f64>,
    /// Original-space objective `cᵀx + offset`.
    pub objective: f64,
    /// Dual multiplier per original row (0 for dropped free rows).
    pub row_duals: Vec<f64>,
    /// Standard-form primal, dual and reduced costs at the final basis.
    pub iterate: PrimalDualIterate,
    /// Basic column per standard-form row. Indices at or past
    /// `standard.n_cols()` are artificial columns left in redundant rows.
    pub basis: Vec<usize>,
    pub pivots: usize,
    pub standard: StandardLp,
}

impl SimplexResult {
    pub fn report(&self) -> Result<ResidualReport, LpError> {
        residuals(&self.standard, &self.iterate)
    }
}

struct Tableau {
    m: usize,
    width: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

enum Phase {
    Done,
    Unbounded,
    Limit,
}

impl Tableau {
    fn at(&self, r: usize, j: usize) -> f64 {
        self.a[r * self.width + j]
    }

    fn pivot(&mut self, pr: usize, pc: usize, active: usize) {
        let w = self.width;
        let piv = self.a[pr * w + pc];
        for j in 0..active {
            self.a[pr * w + j] /= piv;
        }
        self.rhs[pr] /= piv;
        let (prow, rp) = (self.a[pr * w..pr * w + active].to_vec(), self.rhs[pr]);
        for r in 0..self.m {
            if r == pr {
                continue;
            }
            let f = self.a[r * w + pc];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[r * w..r * w + active];
            for (v, p) in row.iter_mut().zip(&prow) {
                *v -= f * p;
            }
            row[pc] = 0.0;
            self.rhs[r] -= f * rp;
        }
        let f = self.cost[pc];
        if f != 0.0 {
            for (v, p) in self.cost[..active].iter_mut().zip(&prow) {
                *v -= f * p;
            }
            self.cost[pc] = 0.0;
            self.cost[w] -= f * rp;
        }
        self.a[pr * w + pc] = 1.0;
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Bland's rule over columns `0..enter_limit`; updates touch `0..active`.
    fn run(&mut self, enter_limit: usize, active: usize, pivot_limit: usize) -> Phase {
        loop {
            let Some(q) = (0..enter_limit).find(|&j| self.cost[j] < -COST_TOL) else {
                return Phase::Done;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, q);
                if a > PIVOT_TOL {
                    let ratio = self.rhs[r].max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            if ratio < bratio || (ratio == bratio && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Phase::Unbounded;
            };
            if self.pivots >= pivot_limit {
                return Phase::Limit;
            }
            self.pivot(r, q, active);
        }
    }
}

/// Solves `p` to optimality with a dense tableau, or reports why not.
///
/// `pivot_limit` counts pivots across both phases.
pub fn solve_dense_simplex(
    p: &LpProblem,
    pivot_limit: usize,
) -> Result<SimplexResult, SimplexError> {
    let s = StandardLp::from_problem(
        p,
        StandardFormOptions {
            drop_free_rows: true,
        },
    )?;
    let (m, n) = (s.n_rows(), s.n_cols());
    if n > MAX_STANDARD_COLS {
        return Err(SimplexError::TooLarge(n));
    }

    // Phase 1 tableau [A | I] with rows flipped so that b >= 0.
    let width = n + m;
    let mut t = Tableau {
        m,
        width,
        a: vec![0.0; m * width],
        rhs: vec![0.0; m],
        cost: vec![0.0; width + 1],
        basis: (n..n + m).collect(),
        pivots: 0,
    };
    let sign: Vec<f64> = s
        .rhs()
        .iter()
        .map(|&b| if b < 0.0 { -1.0 } else { 1.0 })
        .collect();
    for i in 0..m {
        let (cols, vals) = s.matrix().row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            t.a[i * width + j] = sign[i] * v;
        }
        t.a[i * width + n + i] = 1.0;
        t.rhs[i] = sign[i] * s.rhs()[i];
    }
    // reduced costs of min Σ artificials with the artificials basic
    for i in 0..m {
        for j in 0..n {
            t.cost[j] -= t.at(i, j);
        }
        t.cost[width] -= t.rhs[i];
    }

    let finish = |t: Tableau, status| build_result(p, s.clone(), &sign, t, status);

    match t.run(n, width, pivot_limit) {
        Phase::Limit => return finish(t, SimplexStatus::PivotLimit),
        // phase 1 is bounded below by 0
        Phase::Unbounded | Phase::Done => {}
    }
    let infeas: f64 = (0..m).filter(|&r| t.basis[r] >= n).map(|r| t.rhs[r]).sum();
    let scale = 1.0 + t.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if infeas > PHASE1_TOL * scale {
        return finish(t, SimplexStatus::Infeasible);
    }
    // Drive zero-level artificials out where a structural pivot exists;
    // what remains marks a redundant row.
    for r in 0..m {
        if t.basis[r] < n {
            continue;
        }
        if let Some(q) = (0..n).find(|&j| t.at(r, j).abs() > PIVOT_TOL) {
            t.pivot(r, q, width);
        }
    }

    // Phase 2 costs: c_j - c_Bᵀ B⁻¹ A_j over the structural columns.
    let c = s.objective();
    t.cost.iter_mut().for_each(|v| *v = 0.0);
    t.cost[..n].copy_from_slice(c);
    for r in 0..m {
        let b = t.basis[r];
        let cb = if b < n { c[b] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..n {
                t.cost[j] -= cb * t.at(r, j);
            }
            t.cost[width] -= cb * t.rhs[r];
        }
    }
    for r in 0..m {
        if t.basis[r] < n {
            t.cost[t.basis[r]] = 0.0;
        }
    }
    let status = match t.run(n, n, pivot_limit) {
        Phase::Done => SimplexStatus::Optimal,
        Phase::Unbounded => SimplexStatus::Unbounded,
        Phase::Limit => SimplexStatus::PivotLimit,
    };
    finish(t, status)
}

fn build_result(
    p: &LpProblem,
    s: StandardLp,
    sign: &[f64],
    t: Tableau,
    status: SimplexStatus,
) -> Result<SimplexResult, SimplexError> {
    let (m, n) = (s.n_rows(), s.n_cols());
    // Basis matrix in the unflipped rows; an artificial column is sign[i]·e_i.
    let mut bmat = vec![0.0; m * m];
    let dense = s.matrix().to_dense();
    for (k, &col) in t.basis.iter().enumerate() {
        if col < n {
            for i in 0..m {
                bmat[i * m + k] = dense[i * n + col];
            }
        } else {
            let i = col - n;
            bmat[i * m + k] = sign[i];
        }
    }
    let c = s.objective();
    let cb: Vec<f64> = t
        .basis
        .iter()
        .map(|&j| if j < n { c[j] } else { 0.0 })
        .collect();
    let (xb, y) = match Lu::factor(&bmat, m) {
        Some(lu) => (lu.solve(s.rhs()), lu.solve_transpose(&cb)),
        // fall back to the tableau values if the basis went singular
        None => (t.rhs.clone(), vec![0.0; m]),
    };
    let mut x = vec![0.0; n];
    let mut is_basic = vec![false; n];
    for (k, &col) in t.basis.iter().enumerate() {
        if col < n {
            x[col] = xb[k];
            is_basic[col] = true;
        }
    }
    let aty = s.matrix().matvec_transpose(&y)?;
    let z: Vec<f64> = (0..n)
        .map(|j| {
            if is_basic[j] {
                0.0
            } else {
                (c[j] - aty[j]).max(0.0)
            }
        })
        .collect();
    let x_orig = s.restore(&x)?;
    let objective = p.objective_value(&x_orig);
    let row_duals = s
        .row_map()
        .iter()
        .map(|rm| match *rm {
            RowMap::Equality { row }
            | RowMap::Lower { row, .. }
            | RowMap::Upper { row, .. }
            | RowMap::Range { row, .. } => y[row],
            RowMap::Dropped => 0.0,
        })
        .collect();
    Ok(SimplexResult {
        status,
        x: x_orig,
        objective,
        row_duals,
        iterate: PrimalDualIterate { x, y, z },
        basis: t.basis,
        pivots: t.pivots,
        standard: s,
    })
}

/// Dense LU with partial pivoting, row-major.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &[f64], n: usize) -> Option<Self> {
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, big) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            if big <= 1e-14 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(p * n + j, k * n + j);
                }
                perm.swap(p, k);
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / d;
                if f == 0.0 {
                    continue;
                }
                lu[i * n + k] = f;
                for j in k + 1..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        Some(Self { n, lu, perm })
    }

    /// Solves `A x = b`.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Solves `Aᵀ y = c`.
    fn solve_transpose(&self, c: &[f64]) -> Vec<f64> {
        let n = self.n;
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ w = c, Lᵀ v = w, then y = Pᵀ v.
        let mut w = c.to_vec();
        for i in 0..n {
            for j in 0..i {
                w[i] -= self.lu[j * n + i] * w[j];
            }
            w[i] /= self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                w[i] -= self.lu[j * n + i] * w[j];
            }
        }
        let mut y = vec![0.0; n];
        for (k, &i) in self.perm.iter().enumerate() {
            y[i] = w[k];
        }
        y
    }
}
