//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature (default) work is spread over the current
//! rayon pool; without it, or with [`Parallelism::Sequential`], items are
//! processed in order on the calling thread. Results always come back in
//! input order, so output never depends on the thread count.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether parallel execution is compiled in.
    pub const fn available() -> bool {
        cfg!(feature = "parallel")
    }
}

pub fn map<T, R, F>(par: Parallelism, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
        _ => items.into_iter().map(f).collect(),
    }
}

/// Like [`map`] for fallible work; returns the error of the earliest
/// failing item.
pub fn try_map<T, R, E, F>(par: Parallelism, items: Vec<T>, f: F) -> Result<Vec<R>, E>
where
    T: Send,
    R: Send,
    E: Send,
    F: Fn(T) -> Result<R, E> + Sync + Send,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            let all: Vec<Result<R, E>> = items.into_par_iter().map(f).collect();
            all.into_iter().collect()
        }
        _ => items.into_iter().map(f).collect(),
    }
}

/// First item (in input order) for which `f` returns `Some`. Parallel
/// execution stops scheduling work once a hit is found.
pub fn find_first<T, R, F>(par: Parallelism, items: Vec<T>, f: F) -> Option<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Option<R> + Sync + Send,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().find_map_first(f)
        }
        _ => items.into_iter().find_map(f),
    }
}

/// Runs `f` inside a pool of `jobs` threads (ignored without the
/// `parallel` feature).
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}
