//! Data-parallel sweep primitive with a sequential fallback.
//!
//! `indexed_map` evaluates `f(0), ..., f(n-1)` and collects the results in
//! index order. With the `parallel` feature (default) the work is distributed
//! with rayon; results are identical to the sequential path because each item
//! is computed independently and assembled by index.

/// Evaluate `f` over `0..n`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    indexed_map_seq(n, f)
}

/// Always-sequential variant, kept for benchmarking against the parallel path.
pub fn indexed_map_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
