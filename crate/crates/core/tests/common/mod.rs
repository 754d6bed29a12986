//! Small random LPs and a brute-force vertex enumeration oracle.

#![allow(dead_code)]

use lp_asympt_core::lp::{LpProblem, SparseMatrix};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};

pub type TestRng = rand::rngs::StdRng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

const INF: f64 = f64::INFINITY;

/// A boxed LP with integer data, at most `max_n` columns and `max_m` rows.
///
/// With `anchored`, every row is built around an integer reference point so
/// the problem is feasible; otherwise the right-hand sides are random.
pub fn random_boxed_lp(rng: &mut TestRng, max_n: usize, max_m: usize, anchored: bool) -> LpProblem {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_m);
    let mut vl = Vec::with_capacity(n);
    let mut vu = Vec::with_capacity(n);
    let mut x0 = Vec::with_capacity(n);
    for _ in 0..n {
        let lo = rng.random_range(-3i32..=1) as f64;
        let hi = lo + rng.random_range(1i32..=6) as f64;
        vl.push(lo);
        vu.push(hi);
        x0.push(rng.random_range(lo as i32..=hi as i32) as f64);
    }
    let rows: Vec<Vec<(usize, f64)>> = (0..m)
        .map(|_| {
            let mut row = Vec::new();
            for j in 0..n {
                let v = rng.random_range(-5i32..=5) as f64;
                if rng.random_bool(0.7) && v != 0.0 {
                    row.push((j, v));
                }
            }
            row
        })
        .collect();
    let a = SparseMatrix::from_rows(n, &rows).unwrap();
    let act = a.matvec(&x0).unwrap();
    let mut rl = Vec::with_capacity(m);
    let mut ru = Vec::with_capacity(m);
    for i in 0..m {
        let base = if anchored {
            act[i]
        } else {
            rng.random_range(-10i32..=10) as f64
        };
        let (lo, hi) = match rng.random_range(0..4) {
            0 => (-INF, base + rng.random_range(0i32..=3) as f64),
            1 => (base - rng.random_range(0i32..=3) as f64, INF),
            2 => (base, base),
            _ => (
                base - rng.random_range(0i32..=3) as f64,
                base + rng.random_range(1i32..=3) as f64,
            ),
        };
        rl.push(lo);
        ru.push(hi);
    }
    let c: Vec<f64> = (0..n).map(|_| rng.random_range(-5i32..=5) as f64).collect();
    LpProblem::new(c, a, rl, ru, vl, vu).unwrap()
}

/// Adds structure presolve can act on: fixed columns, singleton rows, empty
/// rows and columns that appear in no row.
pub fn random_presolvable_lp(rng: &mut TestRng) -> LpProblem {
    let base = random_boxed_lp(rng, 6, 6, true);
    let (m, n) = (base.n_rows(), base.n_cols());
    let extra_cols = rng.random_range(0..=2);
    let n2 = n + extra_cols;
    let mut vl = base.var_lower().to_vec();
    let mut vu = base.var_upper().to_vec();
    let mut c = base.objective().to_vec();
    for _ in 0..extra_cols {
        let lo = rng.random_range(-2i32..=0) as f64;
        vl.push(lo);
        vu.push(lo + rng.random_range(0i32..=4) as f64);
        c.push(rng.random_range(-3i32..=3) as f64);
    }
    // fix a couple of columns at a bound, which keeps the anchor feasible only
    // if the anchor sat there, so re-anchor rows below
    let x0: Vec<f64> = (0..n2)
        .map(|j| {
            if rng.random_bool(0.25) {
                vu[j] = vl[j];
            }
            vl[j]
        })
        .collect();
    let mut rows: Vec<Vec<(usize, f64)>> = (0..m)
        .map(|i| {
            let (cols, vals) = base.matrix().row(i);
            cols.iter().copied().zip(vals.iter().copied()).collect()
        })
        .collect();
    for _ in 0..rng.random_range(0..=2) {
        let j = rng.random_range(0..n2);
        let coef = [-2.0, -1.0, 1.0, 3.0][rng.random_range(0..4)];
        rows.push(vec![(j, coef)]);
    }
    if rng.random_bool(0.3) {
        rows.push(vec![]);
    }
    let a = SparseMatrix::from_rows(n2, &rows).unwrap();
    let act = a.matvec(&x0).unwrap();
    let mut rl = Vec::new();
    let mut ru = Vec::new();
    for (i, &v) in act.iter().enumerate() {
        let slack = rng.random_range(0i32..=3) as f64;
        let (lo, hi) = if i < m {
            (base.row_lower()[i], base.row_upper()[i])
        } else {
            (-INF, INF)
        };
        // keep the original row type, recentred on the new anchor
        let (lo, hi) = match (lo.is_finite(), hi.is_finite()) {
            (true, true) if lo == hi => (v, v),
            (true, true) => (v - slack, v + slack + 1.0),
            (false, true) => (-INF, v + slack),
            (true, false) => (v - slack, INF),
            (false, false) => (v - slack, v + slack),
        };
        rl.push(lo);
        ru.push(hi);
    }
    LpProblem::new(c, a, rl, ru, vl, vu).unwrap()
}

/// Minimum of the objective over all vertices, or `None` if no vertex is
/// feasible. Only valid for problems whose columns are all boxed and whose
/// data are integers, so singular systems are detected exactly.
pub fn vertex_enumeration(p: &LpProblem) -> Option<f64> {
    let n = p.n_cols();
    let dense = p.matrix().to_dense();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..p.n_rows() {
        let a = dense[i * n..(i + 1) * n].to_vec();
        let (lo, hi) = (p.row_lower()[i], p.row_upper()[i]);
        if lo.is_finite() {
            planes.push((a.clone(), lo));
        }
        if hi.is_finite() && hi != lo {
            planes.push((a, hi));
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), p.var_lower()[j]));
        planes.push((e, p.var_upper()[j]));
    }
    let k = planes.len();
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let mat = DMatrix::from_fn(n, n, |r, c| planes[pick[r]].0[c]);
        let lu = mat.lu();
        if lu.determinant().abs() > 0.5 {
            let rhs = DVector::from_fn(n, |r, _| planes[pick[r]].1);
            if let Some(x) = lu.solve(&rhs) {
                let x: Vec<f64> = x.iter().copied().collect();
                if p.max_violation(&x).unwrap() <= 1e-9 {
                    let obj = p.objective_value(&x);
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
        }
        // next combination in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < k - n + i {
                break;
            }
        }
        pick[i] += 1;
        for r in i + 1..n {
            pick[r] = pick[r - 1] + 1;
        }
    }
}
