//! Order-preserving fan-out over index ranges for the exhaustive checkers.

#[cfg(feature = "parallel")]
pub(crate) fn flat_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Vec<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().flat_map_iter(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn flat_map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> Vec<T>,
{
    (0..n).flat_map(f).collect()
}
