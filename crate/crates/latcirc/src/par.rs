//! Data-parallel driving loops with a sequential fallback.
//!
//! With the default `parallel` feature the heavy inner loops (configuration
//! sums, amplitude updates, estimator shots) fan out over rayon; without it
//! the same chunked loops run on one thread. Chunks are fixed-size and chunk
//! results are combined in index order, so the output is identical for any
//! worker count (and bit-identical between the two backends up to the usual
//! non-associativity of float addition within a chunk, which the fixed
//! chunking also pins down).

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length for index-space sums. Large enough to amortize scheduling,
/// small enough to spread a 2^24-config enumeration over many cores.
pub const CHUNK: u64 = 1 << 14;

/// Sequential chunked sum of `f(i)` for `i in 0..n`.
#[doc(hidden)]
pub fn complex_sum_indexed_seq<F>(n: u64, f: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    let mut total = Complex64::new(0.0, 0.0);
    let mut start = 0u64;
    while start < n {
        let end = (start + CHUNK).min(n);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in start..end {
            acc += f(i);
        }
        total += acc;
        start = end;
    }
    total
}

/// Parallel chunked sum of `f(i)` for `i in 0..n`; chunk partials are added
/// in chunk order.
#[cfg(feature = "parallel")]
#[doc(hidden)]
pub fn complex_sum_indexed_par<F>(n: u64, f: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Complex64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in start..end {
                acc += f(i);
            }
            acc
        })
        .collect();
    partials.into_iter().sum()
}

/// Sum `f(i)` over `0..n` with the active backend.
pub fn complex_sum_indexed<F>(n: u64, f: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    #[cfg(feature = "parallel")]
    {
        complex_sum_indexed_par(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        complex_sum_indexed_seq(n, f)
    }
}

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_sum_matches_direct_sum() {
        let n = 3 * CHUNK + 17;
        let f = |i: u64| Complex64::new(i as f64, (i % 3) as f64);
        let direct: Complex64 = (0..n).map(f).sum();
        let chunked = complex_sum_indexed(n, f);
        assert!((direct - chunked).norm() < 1e-6 * direct.norm());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree() {
        let n = 2 * CHUNK + 5;
        let f = |i: u64| Complex64::new((i as f64).sin(), (i as f64).cos());
        let s = complex_sum_indexed_seq(n, f);
        let p = complex_sum_indexed_par(n, f);
        assert!((s - p).norm() < 1e-12);
    }
}
