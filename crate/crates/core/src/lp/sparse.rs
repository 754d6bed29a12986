//! Compressed-row sparse matrix and the matrix-vector kernels every solver
//! in the crate is built on.

use crate::lp::LpError;
use crate::par::Parallelism;

/// A sparse matrix in compressed row storage.
///
/// Within each row the column indices are strictly increasing and no explicit
/// zeros are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from raw CSR arrays, checking every structural invariant.
    pub fn from_csr(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self, LpError> {
        if row_offsets.len() != n_rows + 1 {
            return Err(LpError::Structure(format!(
                "row_offsets has length {}, expected {}",
                row_offsets.len(),
                n_rows + 1
            )));
        }
        if row_offsets[0] != 0 || row_offsets[n_rows] != col_indices.len() {
            return Err(LpError::Structure(
                "row_offsets must start at 0 and end at nnz".into(),
            ));
        }
        if col_indices.len() != values.len() {
            return Err(LpError::Structure(
                "col_indices and values differ in length".into(),
            ));
        }
        for i in 0..n_rows {
            let (start, end) = (row_offsets[i], row_offsets[i + 1]);
            if start > end {
                return Err(LpError::Structure(format!(
                    "row_offsets decreases at row {i}"
                )));
            }
            for k in start..end {
                let j = col_indices[k];
                if j >= n_cols {
                    return Err(LpError::Structure(format!(
                        "column index {j} out of range in row {i}"
                    )));
                }
                if k > start && col_indices[k - 1] >= j {
                    return Err(LpError::Structure(format!(
                        "column indices not strictly increasing in row {i}"
                    )));
                }
                let v = values[k];
                if v.is_nan() || v.is_infinite() {
                    return Err(LpError::NonFinite(format!("matrix entry ({i}, {j})")));
                }
                if v == 0.0 {
                    return Err(LpError::Structure(format!(
                        "explicit zero stored at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds a matrix from per-row term lists. Terms may come in any order;
    /// zeros are dropped and duplicate columns within a row are rejected.
    pub fn from_rows(n_cols: usize, rows: &[Vec<(usize, f64)>]) -> Result<Self, LpError> {
        let nnz: usize = rows.iter().map(Vec::len).sum();
        let mut row_offsets = Vec::with_capacity(rows.len() + 1);
        let mut col_indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_offsets.push(0);
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            scratch.clear();
            scratch.extend(row.iter().copied().filter(|&(_, v)| v != 0.0));
            scratch.sort_by_key(|&(j, _)| j);
            for w in scratch.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(LpError::Structure(format!(
                        "duplicate column {} in row {i}",
                        w[0].0
                    )));
                }
            }
            for &(j, v) in &scratch {
                col_indices.push(j);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }
        Self::from_csr(rows.len(), n_cols, row_offsets, col_indices, values)
    }

    /// Builds a matrix from a dense row-major array, dropping zeros.
    pub fn from_dense(n_rows: usize, n_cols: usize, dense: &[f64]) -> Result<Self, LpError> {
        if dense.len() != n_rows * n_cols {
            return Err(LpError::Dimension {
                what: "dense array",
                expected: n_rows * n_cols,
                actual: dense.len(),
            });
        }
        let rows: Vec<Vec<(usize, f64)>> = (0..n_rows)
            .map(|i| {
                (0..n_cols)
                    .map(|j| (j, dense[i * n_cols + j]))
                    .filter(|&(_, v)| v != 0.0)
                    .collect()
            })
            .collect();
        Self::from_rows(n_cols, &rows)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_offsets: vec![0; n_rows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[s..e], &self.values[s..e])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_offsets[i + 1] - self.row_offsets[i]
    }

    /// Number of stored entries in each column.
    pub fn col_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_cols];
        for &j in &self.col_indices {
            counts[j] += 1;
        }
        counts
    }

    /// Explicit transpose, again in CSR layout (i.e. the CSC layout of `self`).
    pub fn transpose(&self) -> SparseMatrix {
        let mut row_offsets = vec![0usize; self.n_cols + 1];
        for &j in &self.col_indices {
            row_offsets[j + 1] += 1;
        }
        for j in 0..self.n_cols {
            row_offsets[j + 1] += row_offsets[j];
        }
        let mut next = row_offsets.clone();
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let slot = next[j];
                col_indices[slot] = i;
                values[slot] = v;
                next[j] += 1;
            }
        }
        SparseMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Dense row-major copy. Intended for small matrices and tests.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows * self.n_cols];
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                out[i * self.n_cols + j] = v;
            }
        }
        out
    }

    /// Returns `A v`.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>, LpError> {
        let mut out = vec![0.0; self.n_rows];
        self.matvec_into(v, &mut out, Parallelism::Sequential)?;
        Ok(out)
    }

    /// Returns `Aᵀ v`.
    pub fn matvec_transpose(&self, v: &[f64]) -> Result<Vec<f64>, LpError> {
        let mut out = vec![0.0; self.n_cols];
        self.matvec_transpose_into(v, &mut out)?;
        Ok(out)
    }

    /// Writes `A v` into `out`. Each output entry is accumulated left to right
    /// over its row, so the row-parallel path is bit-identical to the
    /// sequential one.
    pub fn matvec_into(
        &self,
        v: &[f64],
        out: &mut [f64],
        mode: Parallelism,
    ) -> Result<(), LpError> {
        check_len("matvec input", self.n_cols, v.len())?;
        check_len("matvec output", self.n_rows, out.len())?;
        let row_dot = |i: usize| -> f64 {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&j, &a) in cols.iter().zip(vals) {
                acc += a * v[j];
            }
            acc
        };
        crate::par::fill_indexed(out, mode, row_dot);
        Ok(())
    }

    /// Writes `Aᵀ v` into `out` by scattering rows in ascending order.
    pub fn matvec_transpose_into(&self, v: &[f64], out: &mut [f64]) -> Result<(), LpError> {
        check_len("matvec_transpose input", self.n_rows, v.len())?;
        check_len("matvec_transpose output", self.n_cols, out.len())?;
        out.fill(0.0);
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (&j, &a) in cols.iter().zip(vals) {
                out[j] += a * vi;
            }
        }
        Ok(())
    }

    /// Largest absolute entry of each row.
    pub fn row_abs_max(&self) -> Vec<f64> {
        (0..self.n_rows)
            .map(|i| self.row(i).1.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .collect()
    }

    /// Largest absolute entry of each column.
    pub fn col_abs_max(&self) -> Vec<f64> {
        let mut out = vec![0.0f64; self.n_cols];
        for (&j, &v) in self.col_indices.iter().zip(&self.values) {
            out[j] = out[j].max(v.abs());
        }
        out
    }

    /// Returns `diag(row_scale) · A · diag(col_scale)` with the same pattern.
    pub fn scaled(&self, row_scale: &[f64], col_scale: &[f64]) -> SparseMatrix {
        let mut values = self.values.clone();
        for i in 0..self.n_rows {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                values[k] = row_scale[i] * self.values[k] * col_scale[self.col_indices[k]];
            }
        }
        SparseMatrix {
            values,
            ..self.clone()
        }
    }
}

fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<(), LpError> {
    if expected == actual {
        Ok(())
    } else {
        Err(LpError::Dimension {
            what,
            expected,
            actual,
        })
    }
}
