//! Mapping a job over independent seeds.
//!
//! Each seed owns its tree and RNG, so runs never share mutable state and the
//! result order always follows the input order.

/// Runs `job` for every seed on the current thread.
pub fn map_seeds_sequential<T, F>(seeds: &[u64], job: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    seeds.iter().map(|&s| job(s)).collect()
}

/// Runs `job` for every seed on the rayon pool.
#[cfg(feature = "parallel")]
pub fn map_seeds_parallel<T, F>(seeds: &[u64], job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    seeds.par_iter().map(|&s| job(s)).collect()
}

/// Parallel when the `parallel` feature is on, sequential otherwise.
#[cfg(feature = "parallel")]
pub fn map_seeds<T, F>(seeds: &[u64], job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    map_seeds_parallel(seeds, job)
}

#[cfg(not(feature = "parallel"))]
pub fn map_seeds<T, F>(seeds: &[u64], job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    map_seeds_sequential(seeds, job)
}
