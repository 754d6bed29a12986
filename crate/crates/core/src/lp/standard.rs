//! Equality standard form `min cᵀx s.t. Ax = b, x ≥ 0` and the mapping back
//! to the bounded general form.

use crate::lp::{LpError, LpProblem, PrimalDualIterate, SparseMatrix};

#[derive(Debug, Clone, Copy, Default)]
pub struct StandardFormOptions {
    /// Remove rows with both sides infinite instead of rejecting them.
    pub drop_free_rows: bool,
}

/// An auxiliary equality row `x[col] + x[slack] = width` that carries a finite
/// upper bound into standard form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub row: usize,
    pub col: usize,
    pub slack: usize,
}

/// How one original variable is represented by standard-form columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColumnMap {
    /// `x = lower + x_std[col]`, with an optional bound row when the upper
    /// bound is finite.
    Shifted {
        lower: f64,
        col: usize,
        bound: Option<BoundRow>,
    },
    /// `x = upper - x_std[col]` (lower bound is -inf).
    Negated { upper: f64, col: usize },
    /// `x = x_std[pos] - x_std[neg]` for free variables.
    Split { pos: usize, neg: usize },
}

/// How one original row is represented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowMap {
    /// `a x = L`.
    Equality { row: usize },
    /// `a x - s = L`.
    Lower { row: usize, slack: usize },
    /// `a x + s = U`.
    Upper { row: usize, slack: usize },
    /// `a x - s = L` with `s + t = U - L`.
    Range {
        row: usize,
        slack: usize,
        bound: BoundRow,
    },
    /// Free row removed under [`StandardFormOptions::drop_free_rows`].
    Dropped,
}

/// A problem in equality standard form plus the record needed to move
/// points between it and the original bounded form.
#[derive(Debug, Clone)]
pub struct StandardLp {
    matrix: SparseMatrix,
    rhs: Vec<f64>,
    objective: Vec<f64>,
    objective_offset: f64,
    col_map: Vec<ColumnMap>,
    row_map: Vec<RowMap>,
    bound_rows: Vec<BoundRow>,
}

impl StandardLp {
    /// Wraps data that is already in standard form; every column maps to itself.
    pub fn new(matrix: SparseMatrix, rhs: Vec<f64>, objective: Vec<f64>) -> Result<Self, LpError> {
        if rhs.len() != matrix.n_rows() {
            return Err(LpError::Dimension {
                what: "rhs",
                expected: matrix.n_rows(),
                actual: rhs.len(),
            });
        }
        if objective.len() != matrix.n_cols() {
            return Err(LpError::Dimension {
                what: "objective",
                expected: matrix.n_cols(),
                actual: objective.len(),
            });
        }
        if rhs.iter().chain(&objective).any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("standard-form data".into()));
        }
        let col_map = (0..matrix.n_cols())
            .map(|col| ColumnMap::Shifted {
                lower: 0.0,
                col,
                bound: None,
            })
            .collect();
        let row_map = (0..matrix.n_rows())
            .map(|row| RowMap::Equality { row })
            .collect();
        Ok(Self {
            matrix,
            rhs,
            objective,
            objective_offset: 0.0,
            col_map,
            row_map,
            bound_rows: Vec::new(),
        })
    }

    /// Canonicalizes a bounded general-form problem.
    pub fn from_problem(p: &LpProblem, opts: StandardFormOptions) -> Result<Self, LpError> {
        let (m, n) = (p.n_rows(), p.n_cols());
        let (rl, ru) = (p.row_lower(), p.row_upper());
        let (vl, vu) = (p.var_lower(), p.var_upper());

        for i in 0..m {
            if rl[i] == f64::NEG_INFINITY && ru[i] == f64::INFINITY && !opts.drop_free_rows {
                return Err(LpError::FreeRow(i));
            }
        }

        // Structural columns first, in original order.
        let mut n_std = 0usize;
        let mut col_map = Vec::with_capacity(n);
        for j in 0..n {
            let cm = if vl[j].is_finite() {
                n_std += 1;
                ColumnMap::Shifted {
                    lower: vl[j],
                    col: n_std - 1,
                    bound: None,
                }
            } else if vu[j].is_finite() {
                n_std += 1;
                ColumnMap::Negated {
                    upper: vu[j],
                    col: n_std - 1,
                }
            } else {
                n_std += 2;
                ColumnMap::Split {
                    pos: n_std - 2,
                    neg: n_std - 1,
                }
            };
            col_map.push(cm);
        }

        // Row slacks, in row order.
        let mut n_kept = 0usize;
        let mut row_map = Vec::with_capacity(m);
        for i in 0..m {
            let (lo, hi) = (rl[i], ru[i]);
            let rm = if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
                log::info!("dropping free row {i}");
                RowMap::Dropped
            } else if lo == hi {
                n_kept += 1;
                RowMap::Equality { row: n_kept - 1 }
            } else if hi == f64::INFINITY {
                n_kept += 1;
                n_std += 1;
                RowMap::Lower {
                    row: n_kept - 1,
                    slack: n_std - 1,
                }
            } else if lo == f64::NEG_INFINITY {
                n_kept += 1;
                n_std += 1;
                RowMap::Upper {
                    row: n_kept - 1,
                    slack: n_std - 1,
                }
            } else {
                n_kept += 1;
                n_std += 1;
                RowMap::Range {
                    row: n_kept - 1,
                    slack: n_std - 1,
                    // filled in below once bound rows are numbered
                    bound: BoundRow {
                        row: usize::MAX,
                        col: n_std - 1,
                        slack: usize::MAX,
                    },
                }
            };
            row_map.push(rm);
        }

        // Bound rows: variable upper bounds first, then range widths.
        let mut bound_rows = Vec::new();
        let mut next_row = n_kept;
        for j in 0..n {
            if let ColumnMap::Shifted { col, bound, .. } = &mut col_map[j] {
                if vu[j].is_finite() {
                    let br = BoundRow {
                        row: next_row,
                        col: *col,
                        slack: n_std,
                    };
                    next_row += 1;
                    n_std += 1;
                    *bound = Some(br);
                    bound_rows.push(br);
                }
            }
        }
        for rm in row_map.iter_mut() {
            if let RowMap::Range { bound, .. } = rm {
                bound.row = next_row;
                bound.slack = n_std;
                next_row += 1;
                n_std += 1;
                bound_rows.push(*bound);
            }
        }

        let m_std = next_row;
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m_std];
        let mut rhs = vec![0.0; m_std];
        let a = p.matrix();
        for i in 0..m {
            let (std_row, target) = match row_map[i] {
                RowMap::Dropped => continue,
                RowMap::Equality { row } => (row, rl[i]),
                RowMap::Lower { row, slack } => {
                    rows[row].push((slack, -1.0));
                    (row, rl[i])
                }
                RowMap::Upper { row, slack } => {
                    rows[row].push((slack, 1.0));
                    (row, ru[i])
                }
                RowMap::Range { row, slack, .. } => {
                    rows[row].push((slack, -1.0));
                    (row, rl[i])
                }
            };
            let mut shift = 0.0;
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                match col_map[j] {
                    ColumnMap::Shifted { lower, col, .. } => {
                        rows[std_row].push((col, v));
                        shift += v * lower;
                    }
                    ColumnMap::Negated { upper, col } => {
                        rows[std_row].push((col, -v));
                        shift += v * upper;
                    }
                    ColumnMap::Split { pos, neg } => {
                        rows[std_row].push((pos, v));
                        rows[std_row].push((neg, -v));
                    }
                }
            }
            rhs[std_row] = target - shift;
        }
        for j in 0..n {
            if let ColumnMap::Shifted {
                lower,
                bound: Some(br),
                ..
            } = col_map[j]
            {
                rows[br.row].push((br.col, 1.0));
                rows[br.row].push((br.slack, 1.0));
                rhs[br.row] = vu[j] - lower;
            }
        }
        for i in 0..m {
            if let RowMap::Range { bound: br, .. } = row_map[i] {
                rows[br.row].push((br.col, 1.0));
                rows[br.row].push((br.slack, 1.0));
                rhs[br.row] = ru[i] - rl[i];
            }
        }
        let matrix = SparseMatrix::from_rows(n_std, &rows)?;

        let mut objective = vec![0.0; n_std];
        let mut objective_offset = p.objective_offset();
        for (j, &c) in p.objective().iter().enumerate() {
            match col_map[j] {
                ColumnMap::Shifted { lower, col, .. } => {
                    objective[col] = c;
                    objective_offset += c * lower;
                }
                ColumnMap::Negated { upper, col } => {
                    objective[col] = -c;
                    objective_offset += c * upper;
                }
                ColumnMap::Split { pos, neg } => {
                    objective[pos] = c;
                    objective[neg] = -c;
                }
            }
        }

        Ok(Self {
            matrix,
            rhs,
            objective,
            objective_offset,
            col_map,
            row_map,
            bound_rows,
        })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// Constant such that original objective = `cᵀx_std + offset`.
    pub fn objective_offset(&self) -> f64 {
        self.objective_offset
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn col_map(&self) -> &[ColumnMap] {
        &self.col_map
    }

    pub fn row_map(&self) -> &[RowMap] {
        &self.row_map
    }

    pub fn n_original_cols(&self) -> usize {
        self.col_map.len()
    }

    /// `‖b‖₂` and `‖c‖₂` of the standard-form data.
    pub fn norms(&self) -> crate::lp::NormPair {
        crate::lp::NormPair {
            norm_b_2: norm2(&self.rhs),
            norm_c_2: norm2(&self.objective),
        }
    }

    /// Maps a standard-form point back to the original variables.
    pub fn restore(&self, x_std: &[f64]) -> Result<Vec<f64>, LpError> {
        if x_std.len() != self.n_cols() {
            return Err(LpError::Dimension {
                what: "standard-form point",
                expected: self.n_cols(),
                actual: x_std.len(),
            });
        }
        Ok(self
            .col_map
            .iter()
            .map(|cm| match *cm {
                ColumnMap::Shifted { lower, col, .. } => lower + x_std[col],
                ColumnMap::Negated { upper, col } => upper - x_std[col],
                ColumnMap::Split { pos, neg } => x_std[pos] - x_std[neg],
            })
            .collect())
    }

    /// Maps an original-space point into standard form.
    ///
    /// Structural columns are mapped exactly. Row slacks are clamped to
    /// their feasible range, so `b - A x_std` on an original row equals that
    /// row's range violation. For a feasible `x` the result is feasible and
    /// [`StandardLp::restore`] inverts it.
    pub fn lift_primal(&self, p: &LpProblem, x: &[f64]) -> Result<Vec<f64>, LpError> {
        if x.len() != self.n_original_cols() {
            return Err(LpError::Dimension {
                what: "original point",
                expected: self.n_original_cols(),
                actual: x.len(),
            });
        }
        let mut xs = vec![0.0; self.n_cols()];
        for (j, cm) in self.col_map.iter().enumerate() {
            match *cm {
                ColumnMap::Shifted { lower, col, bound } => {
                    xs[col] = x[j] - lower;
                    if let Some(br) = bound {
                        xs[br.slack] = p.var_upper()[j] - x[j];
                    }
                }
                ColumnMap::Negated { upper, col } => xs[col] = upper - x[j],
                ColumnMap::Split { pos, neg } => {
                    xs[pos] = x[j].max(0.0);
                    xs[neg] = (-x[j]).max(0.0);
                }
            }
        }
        let ax = p.matrix().matvec(x)?;
        let (rl, ru) = (p.row_lower(), p.row_upper());
        for (i, rm) in self.row_map.iter().enumerate() {
            match *rm {
                RowMap::Lower { slack, .. } => xs[slack] = (ax[i] - rl[i]).max(0.0),
                RowMap::Upper { slack, .. } => xs[slack] = (ru[i] - ax[i]).max(0.0),
                RowMap::Range { slack, bound, .. } => {
                    let width = ru[i] - rl[i];
                    let s = (ax[i] - rl[i]).clamp(0.0, width);
                    xs[slack] = s;
                    xs[bound.slack] = width - s;
                }
                RowMap::Equality { .. } | RowMap::Dropped => {}
            }
        }
        Ok(xs)
    }

    /// Maps an original-space primal/dual pair into a standard-form iterate.
    ///
    /// Duals of original rows carry over unchanged (dropped rows are ignored).
    /// Each bound row gets dual `min(0, d)` where `d` is the reduced cost of
    /// its bounded column, and reduced costs are `z = max(c - Aᵀy, 0)`, so the
    /// dual residual holds exactly the dual infeasibility.
    pub fn lift_iterate(
        &self,
        p: &LpProblem,
        x: &[f64],
        y: &[f64],
    ) -> Result<PrimalDualIterate, LpError> {
        if y.len() != self.row_map.len() {
            return Err(LpError::Dimension {
                what: "original dual",
                expected: self.row_map.len(),
                actual: y.len(),
            });
        }
        let xs = self.lift_primal(p, x)?;
        let mut ys = vec![0.0; self.n_rows()];
        for (i, rm) in self.row_map.iter().enumerate() {
            match *rm {
                RowMap::Equality { row }
                | RowMap::Lower { row, .. }
                | RowMap::Upper { row, .. }
                | RowMap::Range { row, .. } => ys[row] = y[i],
                RowMap::Dropped => {}
            }
        }
        let mut d = self.matrix.matvec_transpose(&ys)?;
        for (dj, cj) in d.iter_mut().zip(&self.objective) {
            *dj = cj - *dj;
        }
        for br in &self.bound_rows {
            let w = d[br.col].min(0.0);
            ys[br.row] = w;
            d[br.col] -= w;
            d[br.slack] -= w;
        }
        let z = d.iter().map(|v| v.max(0.0)).collect();
        Ok(PrimalDualIterate { x: xs, y: ys, z })
    }
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}
