//! Execution policy for the data-parallel sweeps.
//!
//! Every sweep in the crate (per-radius density counts, per-probe
//! certificates, quadrature panels, random instance batches) maps an
//! independent closure over a slice and collects the results in input order,
//! so the output is identical whichever policy runs it.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a sweep is executed.
///
/// `Parallel` uses the rayon global pool when the `parallel` feature is
/// enabled and silently degrades to `Sequential` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exec {
    Sequential,
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
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            Exec::Parallel => {
                #[cfg(feature = "parallel")]
                {
                    items.par_iter().map(f).collect()
                }
                #[cfg(not(feature = "parallel"))]
                {
                    items.iter().map(f).collect()
                }
            }
        }
    }

    pub fn map_range<U, F>(self, n: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            Exec::Parallel => {
                #[cfg(feature = "parallel")]
                {
                    (0..n).into_par_iter().map(f).collect()
                }
                #[cfg(not(feature = "parallel"))]
                {
                    (0..n).map(f).collect()
                }
            }
        }
    }

    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        self == Exec::Parallel && cfg!(feature = "parallel")
    }
}

/// Sizes the global worker pool. Must run before the first parallel sweep;
/// a no-op in sequential builds.
pub fn configure_threads(threads: usize) -> crate::Result<()> {
    if threads == 0 {
        return Err(crate::Error::param("threads", "must be at least 1"));
    }
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| crate::Error::param("threads", e.to_string()))?;
    }
    Ok(())
}
