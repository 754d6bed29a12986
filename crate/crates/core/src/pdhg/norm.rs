use crate::gen::rng::Stream;
use crate::lp::SparseMatrix;
use crate::par::Parallelism;

/// Power-method estimate of the largest singular value of `a`.
///
/// Starts from a seeded random vector and runs `iters` rounds of
/// `v ← AᵀA v / ‖AᵀA v‖`, costing `2 · iters` matrix-vector products. The
/// estimate never exceeds the true norm by more than rounding. Returns 0 for a
/// matrix with no nonzeros.
pub fn estimate_operator_norm(a: &SparseMatrix, iters: usize, seed: u64) -> f64 {
    estimate_with(a, &a.transpose(), iters, seed, Parallelism::Sequential).0
}

pub(crate) fn estimate_with(
    a: &SparseMatrix,
    at: &SparseMatrix,
    iters: usize,
    seed: u64,
    mode: Parallelism,
) -> (f64, u64) {
    if a.nnz() == 0 {
        return (0.0, 0);
    }
    let mut rng = Stream::new(seed, 0);
    let mut v: Vec<f64> = (0..a.n_cols()).map(|_| rng.uniform(-1.0, 1.0)).collect();
    normalize(&mut v);
    let mut u = vec![0.0; a.n_rows()];
    let mut w = vec![0.0; a.n_cols()];
    let mut est = 0.0;
    let mut matvecs = 0;
    for _ in 0..iters.max(1) {
        a.matvec_into(&v, &mut u, mode).expect("shapes fixed above");
        at.matvec_into(&u, &mut w, mode)
            .expect("shapes fixed above");
        matvecs += 2;
        // ‖AᵀA v‖ for unit v approaches σ²
        let nw = normalize(&mut w);
        if nw == 0.0 {
            // v fell into the null space; the last nonzero estimate stands
            break;
        }
        est = nw.sqrt();
        std::mem::swap(&mut v, &mut w);
    }
    (est, matvecs)
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = crate::lp::norm2(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}
