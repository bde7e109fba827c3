//! Node-level data parallelism. With the `parallel` feature the map runs on
//! the rayon pool; otherwise it is a plain sequential loop. Output order is
//! node order in both cases, and callers reduce sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_nodes<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().with_min_len(64).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_nodes<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Sequential, order-fixed sum of `w[i] * f(i)`.
pub(crate) fn weighted_sum(weights: &[f64], mut f: impl FnMut(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w * f(i);
    }
    acc
}
