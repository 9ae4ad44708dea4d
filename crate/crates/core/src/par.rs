//! Execution policy for the data-parallel sweeps.
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! global pool. Without it, or with [`Execution::Sequential`], the same code
//! paths run on the calling thread. Results never depend on the policy.

use std::ops::Range;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Splits `range` into chunks of at most `chunk` elements and maps each one.
/// Output is in chunk order regardless of policy.
pub fn map_chunks<T, F>(exec: Execution, range: Range<u64>, chunk: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = (range.end.saturating_sub(range.start)).div_ceil(chunk);
    let piece = |i: u64| {
        let lo = range.start + i * chunk;
        lo..(lo + chunk).min(range.end)
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(|i| f(piece(i))).collect();
    }
    let _ = exec;
    (0..count).map(|i| f(piece(i))).collect()
}

/// Maps every item of a slice, preserving order.
pub fn map_items<I, T, F>(exec: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}
