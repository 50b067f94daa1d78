//! Execution policy for embarrassingly parallel loops (Monte-Carlo trials,
//! per-frequency estimation).
//!
//! Results are always collected in index order, so a computation seeded per
//! index gives bit-identical output under either policy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    /// Plain sequential loop.
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    /// Rayon work-stealing pool.
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// Map `f` over `0..n`, preserving order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// Fallible map; the first error in index order is returned.
    pub fn try_map<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map(n, f).into_iter().collect()
    }

    pub fn is_parallel(self) -> bool {
        self != Exec::Sequential
    }
}
