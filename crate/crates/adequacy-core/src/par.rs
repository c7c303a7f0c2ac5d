//! Deterministic work partitioning.
//!
//! Long scans split an index range into contiguous chunks, evaluate each
//! chunk independently, and fold the per-chunk results sequentially in chunk
//! order. With the `parallel` feature the chunks run on a rayon pool; without
//! it they run inline. Either way the fold order is fixed, so results are
//! identical bit-for-bit regardless of thread count.

use std::ops::Range;

/// Resolve a requested worker count: 0 means "use the machine's parallelism".
/// Builds without the `parallel` feature always run single-threaded.
pub fn effective_threads(requested: usize) -> usize {
    if cfg!(not(feature = "parallel")) {
        return 1;
    }
    if requested == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        requested
    }
}

fn chunk_ranges(len: usize, threads: usize) -> Vec<Range<usize>> {
    let threads = threads.max(1);
    let size = len.div_ceil(threads).max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start < len {
        let end = (start + size).min(len);
        out.push(start..end);
        start = end;
    }
    if out.is_empty() {
        out.push(0..0);
    }
    out
}

/// Evaluate `chunk` over a partition of `0..len` and return the per-chunk
/// results in partition order.
pub fn run_partitioned<T, F>(len: usize, threads: usize, chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync,
{
    let ranges = chunk_ranges(len, threads);
    #[cfg(feature = "parallel")]
    {
        if threads > 1 && ranges.len() > 1 {
            use rayon::prelude::*;
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return pool.install(|| ranges.into_par_iter().map(&chunk).collect());
            }
        }
    }
    ranges.into_iter().map(chunk).collect()
}
