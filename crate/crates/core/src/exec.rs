//! Execution strategy for the data-parallel loops (codeword enumeration,
//! sampling, cutoff sweeps). Results never depend on the strategy.

/// How to run a data-parallel loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled; otherwise the
    /// same as [`Exec::Sequential`].
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `f(0), ..., f(n - 1)` in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// `min(f(0), ..., f(n - 1))`, or `None` when `n == 0`.
    pub fn min<T, F>(self, n: usize, f: F) -> Option<T>
    where
        T: Ord + Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).min()
            }
            _ => (0..n).map(f).min(),
        }
    }
}
