//! Order-preserving parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) the map fans out over rayon's
//! global pool; without it the same call runs sequentially.  Both paths
//! return results in input order, so every consumer is deterministic
//! regardless of the feature or thread count.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}

/// Sequential map with the same signature, always available; the bench
/// suite uses it as the baseline against the parallel path.
pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}
