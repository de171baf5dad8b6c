//! Execution backend for the data-parallel kernels.
//!
//! Every hot loop in the crate (table materialization, edge scans, transforms,
//! Monte Carlo sampling, experiment trials) is written against the helpers in
//! this module. With the `parallel` feature they dispatch to rayon; without it
//! they run the sequential loop. [`Exec::Sequential`] is always available so the
//! two paths can be compared in-process (see `benches/parallel.rs`).
//!
//! All reductions are over integers or order-independent bit operations, so the
//! result of a kernel does not depend on thread count or scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Which backend a kernel runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    /// Plain sequential loops.
    Sequential,
    /// rayon work-stealing pool (the pool installed in the current scope).
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Exec::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Exec::Sequential
    }
}

/// Minimum number of items a parallel kernel hands to one task. Below this the
/// sequential path is used regardless of `Exec`.
pub(crate) const MIN_PAR_ITEMS: usize = 1 << 12;

/// Sum `f(i)` over `0..count`, blocked for parallelism.
///
/// `T` must form a commutative monoid under `+` (integers in practice), which
/// makes the reduction order irrelevant.
pub(crate) fn sum_indexed<T, F>(exec: Exec, count: usize, f: F) -> T
where
    T: Send + std::iter::Sum<T>,
    F: Fn(usize) -> T + Sync,
{
    match exec {
        Exec::Sequential => (0..count).map(f).sum(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            if count < MIN_PAR_ITEMS {
                (0..count).map(f).sum()
            } else {
                (0..count).into_par_iter().map(f).sum()
            }
        }
    }
}

/// Fill a `u64` buffer in chunks: `f(chunk_index, chunk)` writes each chunk.
///
/// Chunks are disjoint, so the fill is deterministic under any schedule.
pub(crate) fn fill_chunks<F>(exec: Exec, buf: &mut [u64], chunk_len: usize, f: F)
where
    F: Fn(usize, &mut [u64]) + Sync,
{
    debug_assert!(chunk_len > 0);
    match exec {
        Exec::Sequential => {
            for (ci, chunk) in buf.chunks_mut(chunk_len).enumerate() {
                f(ci, chunk);
            }
        }
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            if buf.len() < MIN_PAR_ITEMS {
                for (ci, chunk) in buf.chunks_mut(chunk_len).enumerate() {
                    f(ci, chunk);
                }
            } else {
                buf.par_chunks_mut(chunk_len)
                    .enumerate()
                    .for_each(|(ci, chunk)| f(ci, chunk));
            }
        }
    }
}

/// Apply `f` to disjoint mutable chunks of a signed buffer (transform stages).
pub(crate) fn for_each_chunk_mut<T, F>(exec: Exec, buf: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(&mut [T]) + Sync,
{
    debug_assert!(chunk_len > 0);
    match exec {
        Exec::Sequential => {
            for chunk in buf.chunks_mut(chunk_len) {
                f(chunk);
            }
        }
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            if buf.len() < MIN_PAR_ITEMS {
                for chunk in buf.chunks_mut(chunk_len) {
                    f(chunk);
                }
            } else {
                buf.par_chunks_mut(chunk_len).for_each(f);
            }
        }
    }
}

/// [`for_each_chunk_mut`] with the chunk index passed along.
pub(crate) fn for_each_chunk_mut_indexed<T, F>(exec: Exec, buf: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    debug_assert!(chunk_len > 0);
    match exec {
        Exec::Sequential => {
            for (ci, chunk) in buf.chunks_mut(chunk_len).enumerate() {
                f(ci, chunk);
            }
        }
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            if buf.len() < MIN_PAR_ITEMS {
                for (ci, chunk) in buf.chunks_mut(chunk_len).enumerate() {
                    f(ci, chunk);
                }
            } else {
                buf.par_chunks_mut(chunk_len)
                    .enumerate()
                    .for_each(|(ci, chunk)| f(ci, chunk));
            }
        }
    }
}

/// Map `0..count` through `f` and collect in index order.
pub(crate) fn map_collect<T, F>(exec: Exec, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    match exec {
        Exec::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..count).into_par_iter().map(f).collect(),
    }
}

/// Elementwise-sum vectors of `u128` produced per index (histogram reduction).
pub(crate) fn sum_histograms<F>(exec: Exec, count: usize, width: usize, f: F) -> Vec<u128>
where
    F: Fn(usize, &mut [u128]) + Sync,
{
    let seq = |range: std::ops::Range<usize>| {
        let mut acc = vec![0u128; width];
        for i in range {
            f(i, &mut acc);
        }
        acc
    };
    match exec {
        Exec::Sequential => seq(0..count),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            if count < 64 {
                seq(0..count)
            } else {
                (0..count)
                    .into_par_iter()
                    .fold(
                        || vec![0u128; width],
                        |mut acc, i| {
                            f(i, &mut acc);
                            acc
                        },
                    )
                    .reduce(
                        || vec![0u128; width],
                        |mut a, b| {
                            for (x, y) in a.iter_mut().zip(b) {
                                *x += y;
                            }
                            a
                        },
                    )
            }
        }
    }
}
