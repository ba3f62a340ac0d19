//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the helpers fan work out on the rayon
//! pool; without it, or with [`Execution::Sequential`], they run in order on
//! the calling thread. Both paths produce identical results because every
//! work item is independent and written to its own slot.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Environment variable capping the size of the global worker pool.
pub const THREADS_ENV: &str = "FRACLAP_THREADS";

/// How an embarrassingly parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// `Parallel` when the crate was built with the `parallel` feature.
    pub fn available() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    #[cfg(feature = "parallel")]
    fn is_parallel(self) -> bool {
        self == Execution::Parallel
    }
}

/// Configure the global pool from `FRACLAP_THREADS`.
///
/// Returns the number of worker threads in effect. Calling this more than once
/// is harmless; later calls keep the pool built first.
pub fn init_thread_pool() -> usize {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// `(0..n).map(f).collect()`, possibly in parallel.
pub fn map<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Fallible variant of [`map`]; the first error (in index order) wins.
pub fn try_map<T, E, F>(exec: Execution, n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map(exec, n, f).into_iter().collect()
}

/// Fill `out[i] = f(i)` in place.
pub fn fill<T, F>(exec: Execution, out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        out.par_iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
        return;
    }
    let _ = exec;
    for (i, o) in out.iter_mut().enumerate() {
        *o = f(i);
    }
}
