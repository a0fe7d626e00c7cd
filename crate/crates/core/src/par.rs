//! Execution policy for the data-parallel loops.
//!
//! Every hot loop in the crate goes through these helpers so that the
//! `parallel` feature can be switched off without touching call sites.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a data-parallel loop is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses the rayon global pool. Without the `parallel` feature this
    /// silently runs sequentially.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Splits `out` into chunks of `chunk` elements and calls `f(start, chunk)`
/// on each, where `start` is the offset of the chunk in `out`.
pub(crate) fn for_each_chunk_mut<T, F>(exec: Exec, out: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => out
            .par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk, c)),
        _ => out
            .chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk, c)),
    }
}

/// Like [`for_each_chunk_mut`] but each chunk may fail; the first error in
/// index order is returned.
pub(crate) fn try_for_each_chunk_mut<T, E, F>(
    exec: Exec,
    out: &mut [T],
    chunk: usize,
    f: F,
) -> Result<(), E>
where
    T: Send,
    E: Send,
    F: Fn(usize, &mut [T]) -> Result<(), E> + Sync + Send,
{
    let chunk = chunk.max(1);
    let results: Vec<Result<(), E>> = match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => out
            .par_chunks_mut(chunk)
            .enumerate()
            .map(|(i, c)| f(i * chunk, c))
            .collect(),
        _ => out
            .chunks_mut(chunk)
            .enumerate()
            .map(|(i, c)| f(i * chunk, c))
            .collect(),
    };
    results.into_iter().collect()
}

/// Maps every index in `range` through `f`, keeping the `Some` results in
/// ascending index order.
pub(crate) fn filter_map_range<T, F>(exec: Exec, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().filter_map(f).collect(),
        _ => range.filter_map(f).collect(),
    }
}

/// Maps each item of `items` through `f`, preserving order.
pub(crate) fn map_slice<S, T, F>(exec: Exec, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}
