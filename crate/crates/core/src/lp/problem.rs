use crate::lp::{LpError, SparseMatrix};

/// A minimization LP in bounded general form:
///
/// ```text
/// min  cᵀx + offset
/// s.t. row_lower ≤ A x ≤ row_upper
///      var_lower ≤ x   ≤ var_upper
/// ```
///
/// Infinite bounds use `f64::INFINITY` / `f64::NEG_INFINITY`. NaN is rejected
/// everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    objective_offset: f64,
    matrix: SparseMatrix,
    row_lower: Vec<f64>,
    row_upper: Vec<f64>,
    var_lower: Vec<f64>,
    var_upper: Vec<f64>,
    row_names: Option<Vec<String>>,
    col_names: Option<Vec<String>>,
}

impl LpProblem {
    pub fn new(
        objective: Vec<f64>,
        matrix: SparseMatrix,
        row_lower: Vec<f64>,
        row_upper: Vec<f64>,
        var_lower: Vec<f64>,
        var_upper: Vec<f64>,
    ) -> Result<Self, LpError> {
        let p = Self {
            objective,
            objective_offset: 0.0,
            matrix,
            row_lower,
            row_upper,
            var_lower,
            var_upper,
            row_names: None,
            col_names: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_objective_offset(mut self, offset: f64) -> Result<Self, LpError> {
        if !offset.is_finite() {
            return Err(LpError::NonFinite("objective offset".into()));
        }
        self.objective_offset = offset;
        Ok(self)
    }

    pub fn with_names(
        mut self,
        row_names: Option<Vec<String>>,
        col_names: Option<Vec<String>>,
    ) -> Result<Self, LpError> {
        if let Some(names) = &row_names {
            check_names(names, self.n_rows(), "row names")?;
        }
        if let Some(names) = &col_names {
            check_names(names, self.n_cols(), "column names")?;
        }
        self.row_names = row_names;
        self.col_names = col_names;
        Ok(self)
    }

    fn validate(&self) -> Result<(), LpError> {
        let (m, n) = (self.matrix.n_rows(), self.matrix.n_cols());
        dim("objective", n, self.objective.len())?;
        dim("row_lower", m, self.row_lower.len())?;
        dim("row_upper", m, self.row_upper.len())?;
        dim("var_lower", n, self.var_lower.len())?;
        dim("var_upper", n, self.var_upper.len())?;
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(LpError::NonFinite(format!("objective coefficient {j}")));
            }
        }
        check_bounds("row", &self.row_lower, &self.row_upper)?;
        check_bounds("variable", &self.var_lower, &self.var_upper)?;
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn objective_offset(&self) -> f64 {
        self.objective_offset
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn row_lower(&self) -> &[f64] {
        &self.row_lower
    }

    pub fn row_upper(&self) -> &[f64] {
        &self.row_upper
    }

    pub fn var_lower(&self) -> &[f64] {
        &self.var_lower
    }

    pub fn var_upper(&self) -> &[f64] {
        &self.var_upper
    }

    pub fn row_names(&self) -> Option<&[String]> {
        self.row_names.as_deref()
    }

    pub fn col_names(&self) -> Option<&[String]> {
        self.col_names.as_deref()
    }

    /// `cᵀx + offset`.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective
            .iter()
            .zip(x)
            .fold(self.objective_offset, |acc, (c, v)| acc + c * v)
    }

    /// Largest violation of any row range or variable bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> Result<f64, LpError> {
        dim("point", self.n_cols(), x.len())?;
        let ax = self.matrix.matvec(x)?;
        let mut worst = 0.0f64;
        for (i, &a) in ax.iter().enumerate() {
            worst = worst.max(self.row_lower[i] - a).max(a - self.row_upper[i]);
        }
        for (j, &v) in x.iter().enumerate() {
            if v.is_nan() {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(self.var_lower[j] - v).max(v - self.var_upper[j]);
        }
        Ok(worst)
    }
}

fn dim(what: &'static str, expected: usize, actual: usize) -> Result<(), LpError> {
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

fn check_bounds(what: &'static str, lower: &[f64], upper: &[f64]) -> Result<(), LpError> {
    for (i, (&lo, &hi)) in lower.iter().zip(upper).enumerate() {
        if lo.is_nan() || hi.is_nan() {
            return Err(LpError::NaN(format!("{what} bound {i}")));
        }
        if lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(LpError::InvertedBounds {
                what,
                index: i,
                lower: lo,
                upper: hi,
            });
        }
    }
    Ok(())
}

/// True when `name` can appear as an identifier in an LP file.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !(first.is_ascii_alphabetic() || first == '_') {
        return false;
    }
    if !name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '[' | ']' | '#'))
    {
        return false;
    }
    let lower = name.to_ascii_lowercase();
    !matches!(lower.as_str(), "inf" | "infinity" | "free")
}

fn check_names(names: &[String], expected: usize, what: &'static str) -> Result<(), LpError> {
    dim(what, expected, names.len())?;
    let mut seen = std::collections::HashSet::with_capacity(names.len());
    for n in names {
        if !is_valid_name(n) || !seen.insert(n.as_str()) {
            return Err(LpError::InvalidName(n.clone()));
        }
    }
    Ok(())
}
