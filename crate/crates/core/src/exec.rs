//! Data-parallel fan-out with a sequential fallback.
//!
//! Work items are indexed and results are gathered in index order, so both
//! modes produce identical output whenever each item owns its random stream.

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Sequential,
    /// Uses the rayon pool. Falls back to sequential without the `parallel`
    /// feature.
    Parallel,
}

impl Exec {
    pub fn from_jobs(jobs: usize) -> Exec {
        if jobs > 1 {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

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

    /// Like [`Exec::map`] but stops at the first error in index order.
    pub fn try_map<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map(n, f).into_iter().collect()
    }
}

/// Sizes the global pool used by [`Exec::Parallel`]. Only the first call has
/// an effect; returns false when the pool was already configured or the
/// crate was built without `parallel`.
pub fn set_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}
