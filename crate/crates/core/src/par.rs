//! Execution policy for the data-parallel kernels.
//!
//! Every kernel splits its work into index chunks and reduces the per-chunk
//! results with an associative, order-independent operation, so `Sequential`
//! and `Parallel` always return identical values. Without the `parallel`
//! feature both variants run on the calling thread.

use std::ops::Range;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

fn chunks(total: u64, chunk: u64) -> impl Iterator<Item = Range<u64>> + Clone {
    let chunk = chunk.max(1);
    let n = total.div_ceil(chunk);
    (0..n).map(move |i| i * chunk..((i + 1) * chunk).min(total))
}

/// Minimum over all chunks of `f(range)`.
pub fn min_over<T, F>(exec: Exec, total: u64, chunk: u64, f: F) -> Option<T>
where
    T: Ord + Send,
    F: Fn(Range<u64>) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            let n = total.div_ceil(chunk.max(1));
            let c = chunk.max(1);
            (0..n)
                .into_par_iter()
                .filter_map(|i| f(i * c..((i + 1) * c).min(total)))
                .min()
        }
        _ => chunks(total, chunk).filter_map(f).min(),
    }
}

/// The result of the lowest-indexed chunk for which `f` returns `Some`.
pub fn find_first<T, F>(exec: Exec, total: u64, chunk: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(Range<u64>) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            let n = total.div_ceil(chunk.max(1));
            let c = chunk.max(1);
            (0..n)
                .into_par_iter()
                .find_map_first(|i| f(i * c..((i + 1) * c).min(total)))
        }
        _ => chunks(total, chunk).find_map(f),
    }
}

/// Sum of `f(range)` over all chunks.
pub fn sum_over<F>(exec: Exec, total: u64, chunk: u64, f: F) -> u64
where
    F: Fn(Range<u64>) -> u64 + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            let n = total.div_ceil(chunk.max(1));
            let c = chunk.max(1);
            (0..n)
                .into_par_iter()
                .map(|i| f(i * c..((i + 1) * c).min(total)))
                .sum()
        }
        _ => chunks(total, chunk).map(f).sum(),
    }
}

/// Order-preserving map over a slice.
pub fn map_vec<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}
