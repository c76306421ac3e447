//! Data-parallel execution helpers.
//!
//! With the default `parallel` feature, [`map_indexed`] fans work out over
//! rayon; without it, it degrades to the sequential loop. Results are
//! collected in index order either way, so callers that derive one random
//! substream per index get identical output from both paths.

use crate::oracle::RandomStream;

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
    map_indexed_seq(count, f)
}

/// Always-sequential variant, kept available for determinism checks and
/// the comparison benchmarks.
pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Runs `trials` independent jobs, each on its own substream of `base`.
pub fn run_trials<T, F>(trials: usize, base: &RandomStream, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, RandomStream) -> T + Sync + Send,
{
    map_indexed(trials, |t| f(t, base.substream(t as u64)))
}
