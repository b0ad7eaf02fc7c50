//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it they are plain iterators. Results are always in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Smallest index in `0..n` satisfying `f`.
#[cfg(feature = "parallel")]
pub fn find_first<F>(n: u64, f: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..n).into_par_iter().find_first(|&i| f(i))
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<F>(n: u64, f: F) -> Option<u64>
where
    F: Fn(u64) -> bool,
{
    (0..n).find(|&i| f(i))
}

/// Runs `f` on a single worker so benchmarks can compare against the
/// parallel path inside one binary.
pub struct Sequential {
    #[cfg(feature = "parallel")]
    pool: rayon::ThreadPool,
}

impl Sequential {
    pub fn new() -> Self {
        Sequential {
            #[cfg(feature = "parallel")]
            pool: rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("single-thread pool"),
        }
    }

    #[cfg(feature = "parallel")]
    pub fn run<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }

    #[cfg(not(feature = "parallel"))]
    pub fn run<R>(&self, f: impl FnOnce() -> R) -> R {
        f()
    }
}

impl Default for Sequential {
    fn default() -> Self {
        Self::new()
    }
}
