//! Execution strategy for the data-parallel inner loops (growth functions,
//! shattering search, goal tables, grid checks).
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on the rayon
//! global pool. Without it, `Parallel` silently degrades to the sequential
//! path, so callers never need their own `cfg` switches. Every helper returns
//! results in input order, which keeps all outputs deterministic regardless of
//! the strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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
    /// Below this many items the parallel path is not worth the split.
    const MIN_PARALLEL: usize = 64;

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn use_parallel(self, len: usize) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel && len >= Self::MIN_PARALLEL
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.use_parallel(items.len()) {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// First item (in slice order) satisfying `pred`.
    pub fn find_first<T, F>(self, items: &[T], pred: F) -> Option<&T>
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.use_parallel(items.len()) {
            return items.par_iter().find_first(|t| pred(t));
        }
        items.iter().find(|t| pred(t))
    }

    pub fn sum<T, F>(self, items: &[T], f: F) -> u64
    where
        T: Sync,
        F: Fn(&T) -> u64 + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.use_parallel(items.len()) {
            return items.par_iter().map(f).sum();
        }
        items.iter().map(f).sum()
    }
}
