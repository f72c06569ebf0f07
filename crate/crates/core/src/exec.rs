//! Deterministic map-over-index-range driver.
//!
//! Every data-parallel loop in the crate funnels through [`map_indexed`]: a
//! map over `0..total` collected in index order. With the `parallel` feature
//! the map runs on the rayon pool; without it the same closure runs
//! sequentially. Reductions downstream always fold the collected vector in
//! index order, so the numeric output is bit-identical for any worker count,
//! including the single-threaded build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..total).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..total).map(f).collect()
}

/// Number of set partitions evaluated per work chunk. Fixed so that the
/// chunk boundaries (and therefore the summation order) never depend on the
/// worker count.
pub(crate) const PARTITION_CHUNK: u64 = 1 << 14;
