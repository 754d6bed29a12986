use crate::gen::{FeasibilityCertificate, GenError};
use crate::lp::{LpProblem, SparseMatrix};

const INF: f64 = f64::INFINITY;

/// How a row's bounds are chosen. The `*Ref` kinds are resolved against the
/// row activity at the reference point once all columns are known.
#[derive(Debug, Clone, Copy)]
pub(crate) enum RowKind {
    /// Explicit bounds that the reference point is known to satisfy.
    Fixed(f64, f64),
    /// `a·x = a·x_ref`
    EqualRef,
    /// `a·x ≤ act + margin·|act| + plus`
    UpperRef { margin: f64, plus: f64 },
    /// `a·x ≥ act - margin·|act|`
    LowerRef { margin: f64 },
}

impl RowKind {
    pub const LE0: RowKind = RowKind::Fixed(-INF, 0.0);
    pub const GE0: RowKind = RowKind::Fixed(0.0, INF);
    pub const EQ0: RowKind = RowKind::Fixed(0.0, 0.0);
}

/// Row-wise model assembly with a reference point riding along.
#[derive(Default)]
pub(crate) struct ModelBuilder {
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x_ref: Vec<f64>,
    row_offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    kinds: Vec<RowKind>,
    scratch: Vec<(usize, f64)>,
}

impl ModelBuilder {
    pub fn with_capacity(rows: usize, cols: usize, nnz: usize) -> Self {
        let mut b = Self {
            cost: Vec::with_capacity(cols),
            lower: Vec::with_capacity(cols),
            upper: Vec::with_capacity(cols),
            x_ref: Vec::with_capacity(cols),
            row_offsets: Vec::with_capacity(rows + 1),
            cols: Vec::with_capacity(nnz),
            vals: Vec::with_capacity(nnz),
            kinds: Vec::with_capacity(rows),
            scratch: Vec::new(),
        };
        b.row_offsets.push(0);
        b
    }

    pub fn add_col(&mut self, cost: f64, lower: f64, upper: f64, x_ref: f64) -> usize {
        self.cost.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.x_ref.push(x_ref);
        self.cost.len() - 1
    }

    pub fn n_cols(&self) -> usize {
        self.cost.len()
    }

    /// Appends a row. Terms may come in any column order but must name
    /// distinct columns with nonzero coefficients.
    pub fn add_row<I>(&mut self, terms: I, kind: RowKind)
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        self.scratch.clear();
        self.scratch.extend(terms);
        self.scratch.sort_unstable_by_key(|&(j, _)| j);
        debug_assert!(self.scratch.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(self.scratch.iter().all(|&(_, v)| v != 0.0 && v.is_finite()));
        for &(j, v) in &self.scratch {
            self.cols.push(j);
            self.vals.push(v);
        }
        self.row_offsets.push(self.cols.len());
        self.kinds.push(kind);
    }

    pub fn finish(self) -> Result<(LpProblem, FeasibilityCertificate), GenError> {
        let n = self.cost.len();
        let m = self.kinds.len();
        let matrix = SparseMatrix::from_csr(m, n, self.row_offsets, self.cols, self.vals)
            .map_err(|e| GenError::Internal(e.to_string()))?;
        let act = matrix
            .matvec(&self.x_ref)
            .map_err(|e| GenError::Internal(e.to_string()))?;
        let mut row_lower = Vec::with_capacity(m);
        let mut row_upper = Vec::with_capacity(m);
        for (kind, a) in self.kinds.iter().zip(act) {
            let (lo, hi) = match *kind {
                RowKind::Fixed(lo, hi) => (lo, hi),
                RowKind::EqualRef => (a, a),
                RowKind::UpperRef { margin, plus } => (-INF, a + margin * a.abs() + plus),
                RowKind::LowerRef { margin } => (a - margin * a.abs(), INF),
            };
            row_lower.push(lo);
            row_upper.push(hi);
        }
        let lp = LpProblem::new(
            self.cost, matrix, row_lower, row_upper, self.lower, self.upper,
        )
        .map_err(|e| GenError::Internal(e.to_string()))?;
        Ok((lp, FeasibilityCertificate { x_ref: self.x_ref }))
    }
}
