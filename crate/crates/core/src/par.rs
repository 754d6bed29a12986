//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature enabled, [`Parallelism::Parallel`] dispatches
//! through rayon. Without it every call runs sequentially, so callers never
//! need their own `cfg` gates.

/// Execution mode for data-parallel loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Sequential,
    Parallel,
}

impl Parallelism {
    /// `Parallel` when `jobs > 1`, else `Sequential`.
    pub fn from_jobs(jobs: usize) -> Self {
        if jobs > 1 {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }

    /// True when this mode actually runs on more than one thread.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Sets `out[i] = f(i)` for every index.
pub fn fill_indexed<F>(out: &mut [f64], mode: Parallelism, f: F)
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Parallelism::Parallel {
        use rayon::prelude::*;
        // Small vectors are not worth the fork/join overhead.
        if out.len() >= 4096 {
            out.par_iter_mut()
                .with_min_len(1024)
                .enumerate()
                .for_each(|(i, o)| *o = f(i));
            return;
        }
    }
    let _ = mode;
    for (i, o) in out.iter_mut().enumerate() {
        *o = f(i);
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, R, F>(items: &[T], mode: Parallelism, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Parallelism::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, mode: Parallelism, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Parallelism::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}
