use crate::lp::{LpProblem, SparseMatrix};

/// Number of Ruiz sweeps applied by [`diagonal_scale`].
pub const RUIZ_SWEEPS: usize = 10;

/// A problem rescaled as `Â = D_r A D_c`, with the scale vectors kept so
/// points can be mapped back: `x = D_c x̂`, `y = D_r ŷ`.
#[derive(Debug, Clone)]
pub struct ScaledProblem {
    pub problem: LpProblem,
    pub row_scale: Vec<f64>,
    pub col_scale: Vec<f64>,
}

impl ScaledProblem {
    /// The trivial scaling of `p`.
    pub fn identity(p: &LpProblem) -> Self {
        Self {
            problem: p.clone(),
            row_scale: vec![1.0; p.n_rows()],
            col_scale: vec![1.0; p.n_cols()],
        }
    }

    pub fn unscale_primal(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.col_scale).map(|(v, d)| v * d).collect()
    }

    pub fn unscale_dual(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.row_scale).map(|(v, d)| v * d).collect()
    }

    pub fn scale_primal(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.col_scale).map(|(v, d)| v / d).collect()
    }

    pub fn scale_dual(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.row_scale).map(|(v, d)| v / d).collect()
    }
}

/// Cumulative Ruiz scale vectors for `a` after `sweeps` rounds. Each round
/// divides every row and column by the square root of its current ∞-norm;
/// empty rows and columns keep scale 1.
pub fn ruiz_scales(a: &SparseMatrix, sweeps: usize) -> (Vec<f64>, Vec<f64>) {
    let mut dr = vec![1.0; a.n_rows()];
    let mut dc = vec![1.0; a.n_cols()];
    let mut cur = a.clone();
    for _ in 0..sweeps {
        let rmax = cur.row_abs_max();
        let cmax = cur.col_abs_max();
        let fr: Vec<f64> = rmax.iter().map(|&v| inv_sqrt(v)).collect();
        let fc: Vec<f64> = cmax.iter().map(|&v| inv_sqrt(v)).collect();
        dr.iter_mut().zip(&fr).for_each(|(d, f)| *d *= f);
        dc.iter_mut().zip(&fc).for_each(|(d, f)| *d *= f);
        cur = a.scaled(&dr, &dc);
    }
    (dr, dc)
}

fn inv_sqrt(v: f64) -> f64 {
    if v > 0.0 {
        1.0 / v.sqrt()
    } else {
        1.0
    }
}

/// Ruiz equilibration of `p` with [`RUIZ_SWEEPS`] sweeps. Objective, bounds
/// and row ranges are transformed consistently, so `p` and the result have
/// the same optimal value and their points correspond through the recorded
/// scales.
pub fn diagonal_scale(p: &LpProblem) -> ScaledProblem {
    scale_problem(p, RUIZ_SWEEPS, false)
}

/// Ruiz sweeps, optionally followed by one Pock-Chambolle pass that divides
/// each row and column by the square root of its 1-norm.
pub fn scale_problem(p: &LpProblem, sweeps: usize, pock_chambolle: bool) -> ScaledProblem {
    let (mut dr, mut dc) = ruiz_scales(p.matrix(), sweeps);
    if pock_chambolle {
        let cur = p.matrix().scaled(&dr, &dc);
        let mut col_sum = vec![0.0; cur.n_cols()];
        for (i, d) in dr.iter_mut().enumerate() {
            let (cols, vals) = cur.row(i);
            let mut row_sum = 0.0;
            for (&j, &a) in cols.iter().zip(vals) {
                row_sum += a.abs();
                col_sum[j] += a.abs();
            }
            *d *= inv_sqrt(row_sum);
        }
        for (d, &s) in dc.iter_mut().zip(&col_sum) {
            *d *= inv_sqrt(s);
        }
    }
    let c: Vec<f64> = p.objective().iter().zip(&dc).map(|(c, d)| c * d).collect();
    let rl: Vec<f64> = p.row_lower().iter().zip(&dr).map(|(v, d)| v * d).collect();
    let ru: Vec<f64> = p.row_upper().iter().zip(&dr).map(|(v, d)| v * d).collect();
    let vl: Vec<f64> = p.var_lower().iter().zip(&dc).map(|(v, d)| v / d).collect();
    let vu: Vec<f64> = p.var_upper().iter().zip(&dc).map(|(v, d)| v / d).collect();
    let problem = LpProblem::new(c, p.matrix().scaled(&dr, &dc), rl, ru, vl, vu)
        .and_then(|s| s.with_objective_offset(p.objective_offset()))
        .expect("positive finite scales preserve validity");
    ScaledProblem {
        problem,
        row_scale: dr,
        col_scale: dc,
    }
}
