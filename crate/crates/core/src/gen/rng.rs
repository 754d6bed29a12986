use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A ChaCha8 stream keyed by `(seed, block)`. Each logical block of a family
/// (topology, costs, reference flows, ...) draws from its own stream, so
/// changing how many numbers one block consumes never shifts another.
pub(crate) struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(seed: u64, block: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        Self(rng)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer on `0..n` by rejection (no modulo bias). `n > 0`.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let n = n as u64;
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.0.next_u64();
            if v < zone {
                return (v % n) as usize;
            }
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// `k` distinct values from `0..n`, sorted ascending. `k <= n`.
    pub fn distinct_sorted(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        if 2 * k > n {
            // partial Fisher-Yates over the whole range
            let mut all: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = i + self.index(n - i);
                all.swap(i, j);
            }
            all.truncate(k);
            all.sort_unstable();
            return all;
        }
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let v = self.index(n);
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out.sort_unstable();
        out
    }
}
