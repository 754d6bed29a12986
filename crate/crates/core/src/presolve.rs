//! A small, safe presolve: fixed columns, empty rows, singleton rows and
//! empty columns, applied to a fixpoint, with a postsolve stack that maps a
//! reduced solution back to the original space.

use thiserror::Error;

use crate::lp::{LpError, LpProblem, SparseMatrix};

/// Feasibility tolerance for deciding that an empty row is violated or that
/// tightened bounds cross.
pub const FEAS_TOL: f64 = 1e-9;

/// Pass limit for the fixpoint loop.
pub const MAX_PASSES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PresolveError {
    #[error("problem is infeasible: {0}")]
    ProvenInfeasible(String),
    #[error("problem is unbounded: {0}")]
    ProvenUnbounded(String),
}

/// One reversible reduction, in the order applied.
#[derive(Debug, Clone, PartialEq)]
pub enum Reduction {
    /// Column fixed by equal bounds and substituted out.
    FixedColumn { col: usize, value: f64 },
    /// Row with no remaining entries, dropped.
    EmptyRow { row: usize },
    /// Row with one entry turned into bounds on that column and dropped.
    SingletonRow {
        row: usize,
        col: usize,
        coef: f64,
        old_lower: f64,
        old_upper: f64,
    },
    /// Column with no remaining entries, set to its best bound.
    EmptyColumn { col: usize, value: f64 },
}

/// Everything needed to undo a presolve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PostsolveStack {
    n_cols: usize,
    n_rows: usize,
    kept_cols: Vec<usize>,
    kept_rows: Vec<usize>,
    records: Vec<Reduction>,
    passes: usize,
}

impl PostsolveStack {
    /// The identity stack for a problem of the given shape.
    pub fn identity(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_cols,
            n_rows,
            kept_cols: (0..n_cols).collect(),
            kept_rows: (0..n_rows).collect(),
            records: Vec::new(),
            passes: 0,
        }
    }

    pub fn records(&self) -> &[Reduction] {
        &self.records
    }

    /// Original indices of the columns kept in the reduced problem.
    pub fn kept_cols(&self) -> &[usize] {
        &self.kept_cols
    }

    /// Original indices of the rows kept in the reduced problem.
    pub fn kept_rows(&self) -> &[usize] {
        &self.kept_rows
    }

    /// Number of fixpoint passes that changed something.
    pub fn passes(&self) -> usize {
        self.passes
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

struct Work<'a> {
    p: &'a LpProblem,
    csc: SparseMatrix,
    row_lo: Vec<f64>,
    row_hi: Vec<f64>,
    col_lo: Vec<f64>,
    col_hi: Vec<f64>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
    row_count: Vec<usize>,
    col_count: Vec<usize>,
    offset: f64,
    records: Vec<Reduction>,
}

impl Work<'_> {
    fn fix_column(&mut self, j: usize, value: f64) {
        let (rows, vals) = self.csc.row(j);
        for (&i, &a) in rows.iter().zip(vals) {
            if self.row_alive[i] {
                self.row_lo[i] -= a * value;
                self.row_hi[i] -= a * value;
                self.row_count[i] -= 1;
            }
        }
        self.offset += self.p.objective()[j] * value;
        self.col_alive[j] = false;
    }

    fn drop_row(&mut self, i: usize) {
        let (cols, _) = self.p.matrix().row(i);
        for &j in cols {
            if self.col_alive[j] {
                self.col_count[j] -= 1;
            }
        }
        self.row_alive[i] = false;
    }

    fn pass(&mut self) -> Result<bool, PresolveError> {
        let (m, n) = (self.p.n_rows(), self.p.n_cols());
        let mut changed = false;
        for j in 0..n {
            if self.col_alive[j] && self.col_lo[j] == self.col_hi[j] {
                let value = self.col_lo[j];
                self.fix_column(j, value);
                self.records.push(Reduction::FixedColumn { col: j, value });
                changed = true;
            }
        }
        for i in 0..m {
            if !self.row_alive[i] {
                continue;
            }
            match self.row_count[i] {
                0 => {
                    let (lo, hi) = (self.row_lo[i], self.row_hi[i]);
                    if lo > FEAS_TOL * (1.0 + lo.abs()) || hi < -FEAS_TOL * (1.0 + hi.abs()) {
                        return Err(PresolveError::ProvenInfeasible(format!(
                            "row {i} has no entries but requires {lo} <= 0 <= {hi}"
                        )));
                    }
                    self.row_alive[i] = false;
                    self.records.push(Reduction::EmptyRow { row: i });
                    changed = true;
                }
                1 => {
                    let (cols, vals) = self.p.matrix().row(i);
                    let (j, a) = cols
                        .iter()
                        .zip(vals)
                        .find(|(&j, _)| self.col_alive[j])
                        .map(|(&j, &a)| (j, a))
                        .expect("row count says one live entry");
                    let (lo, hi) = if a > 0.0 {
                        (self.row_lo[i] / a, self.row_hi[i] / a)
                    } else {
                        (self.row_hi[i] / a, self.row_lo[i] / a)
                    };
                    let (old_lower, old_upper) = (self.col_lo[j], self.col_hi[j]);
                    let mut new_lo = old_lower.max(lo);
                    let mut new_hi = old_upper.min(hi);
                    if new_lo > new_hi {
                        if new_lo - new_hi > FEAS_TOL * (1.0 + new_lo.abs().max(new_hi.abs())) {
                            return Err(PresolveError::ProvenInfeasible(format!(
                                "row {i} forces column {j} into [{new_lo}, {new_hi}]"
                            )));
                        }
                        // crossed by rounding only: snap to the tighter side
                        let mid = if old_lower >= lo { new_lo } else { new_hi };
                        new_lo = mid;
                        new_hi = mid;
                    }
                    self.col_lo[j] = new_lo;
                    self.col_hi[j] = new_hi;
                    self.drop_row(i);
                    self.records.push(Reduction::SingletonRow {
                        row: i,
                        col: j,
                        coef: a,
                        old_lower,
                        old_upper,
                    });
                    changed = true;
                }
                _ => {}
            }
        }
        for j in 0..n {
            if !self.col_alive[j] || self.col_count[j] != 0 {
                continue;
            }
            let c = self.p.objective()[j];
            let (lo, hi) = (self.col_lo[j], self.col_hi[j]);
            let value = if c > 0.0 {
                lo
            } else if c < 0.0 {
                hi
            } else if lo.is_finite() {
                lo
            } else if hi.is_finite() {
                hi
            } else {
                0.0
            };
            if !value.is_finite() {
                return Err(PresolveError::ProvenUnbounded(format!(
                    "column {j} appears in no row and its cost {c} improves without bound"
                )));
            }
            self.fix_column(j, value);
            self.records.push(Reduction::EmptyColumn { col: j, value });
            changed = true;
        }
        Ok(changed)
    }
}

/// Reduces `p`. The result is never larger than `p` in rows, columns or
/// nonzeros.
pub fn presolve(p: &LpProblem) -> Result<(LpProblem, PostsolveStack), PresolveError> {
    let (m, n) = (p.n_rows(), p.n_cols());
    let a = p.matrix();
    let mut w = Work {
        p,
        csc: a.transpose(),
        row_lo: p.row_lower().to_vec(),
        row_hi: p.row_upper().to_vec(),
        col_lo: p.var_lower().to_vec(),
        col_hi: p.var_upper().to_vec(),
        row_alive: vec![true; m],
        col_alive: vec![true; n],
        row_count: (0..m).map(|i| a.row_nnz(i)).collect(),
        col_count: a.col_counts(),
        offset: p.objective_offset(),
        records: Vec::new(),
    };
    let mut passes = 0;
    loop {
        if passes == MAX_PASSES {
            log::warn!("presolve stopped at the {MAX_PASSES}-pass cap before reaching a fixpoint");
            break;
        }
        if !w.pass()? {
            break;
        }
        passes += 1;
    }

    let kept_cols: Vec<usize> = (0..n).filter(|&j| w.col_alive[j]).collect();
    let kept_rows: Vec<usize> = (0..m).filter(|&i| w.row_alive[i]).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &j) in kept_cols.iter().enumerate() {
        new_index[j] = k;
    }
    let rows: Vec<Vec<(usize, f64)>> = kept_rows
        .iter()
        .map(|&i| {
            let (cols, vals) = a.row(i);
            cols.iter()
                .zip(vals)
                .filter(|(&j, _)| w.col_alive[j])
                .map(|(&j, &v)| (new_index[j], v))
                .collect()
        })
        .collect();
    let internal = |e: LpError| PresolveError::ProvenInfeasible(e.to_string());
    let matrix = SparseMatrix::from_rows(kept_cols.len(), &rows).map_err(internal)?;
    let pick = |v: &[f64], idx: &[usize]| idx.iter().map(|&k| v[k]).collect::<Vec<f64>>();
    let reduced = LpProblem::new(
        pick(p.objective(), &kept_cols),
        matrix,
        pick(&w.row_lo, &kept_rows),
        pick(&w.row_hi, &kept_rows),
        pick(&w.col_lo, &kept_cols),
        pick(&w.col_hi, &kept_cols),
    )
    .and_then(|r| r.with_objective_offset(w.offset))
    .and_then(|r| {
        let rn = p
            .row_names()
            .map(|names| kept_rows.iter().map(|&i| names[i].clone()).collect());
        let cn = p
            .col_names()
            .map(|names| kept_cols.iter().map(|&j| names[j].clone()).collect());
        r.with_names(rn, cn)
    })
    .map_err(internal)?;

    Ok((
        reduced,
        PostsolveStack {
            n_cols: n,
            n_rows: m,
            kept_cols,
            kept_rows,
            records: w.records,
            passes,
        },
    ))
}

/// Maps a reduced-space primal solution back to the original columns.
pub fn postsolve(x_reduced: &[f64], stack: &PostsolveStack) -> Result<Vec<f64>, LpError> {
    if x_reduced.len() != stack.kept_cols.len() {
        return Err(LpError::Dimension {
            what: "reduced solution",
            expected: stack.kept_cols.len(),
            actual: x_reduced.len(),
        });
    }
    let mut x = vec![0.0; stack.n_cols];
    for (&j, &v) in stack.kept_cols.iter().zip(x_reduced) {
        x[j] = v;
    }
    for r in stack.records.iter().rev() {
        match *r {
            Reduction::FixedColumn { col, value } | Reduction::EmptyColumn { col, value } => {
                x[col] = value;
            }
            Reduction::EmptyRow { .. } | Reduction::SingletonRow { .. } => {}
        }
    }
    Ok(x)
}
