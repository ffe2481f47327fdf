//! Execution strategy for the quantifier scans and enumeration loops.
//!
//! Every heavy loop in the crate goes through the helpers here so that the
//! same code path runs either on the rayon pool or sequentially. Without the
//! `parallel` feature, [`Strategy::Parallel`] silently degrades to a plain
//! sequential loop.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a scan should be scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// True when this strategy actually fans out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Returns the witness of the smallest index in `range` for which `f`
/// yields `Some`. The result does not depend on the strategy.
pub fn find_first<T, F>(strategy: Strategy, range: Range<usize>, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return range.into_par_iter().find_map_first(f);
    }
    let _ = strategy;
    range.into_iter().find_map(f)
}

/// True when `f` holds for every index in `range`.
pub fn all<F>(strategy: Strategy, range: Range<usize>, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_first(strategy, range, |i| if f(i) { None } else { Some(()) }).is_none()
}

/// Order-preserving map over a slice.
pub fn map<I, T, F>(strategy: Strategy, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Order-preserving map over an index range.
pub fn map_range<T, F>(strategy: Strategy, range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = strategy;
    range.map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_is_deterministic() {
        for s in [Strategy::Sequential, Strategy::Parallel] {
            let w = find_first(s, 0..1000, |i| (i % 97 == 13).then_some(i));
            assert_eq!(w, Some(13));
        }
    }

    #[test]
    fn map_preserves_order() {
        let xs: Vec<usize> = (0..257).collect();
        let seq = map(Strategy::Sequential, &xs, |x| x * x);
        let par = map(Strategy::Parallel, &xs, |x| x * x);
        assert_eq!(seq, par);
        assert!(all(Strategy::Parallel, 0..100, |i| i < 100));
        assert!(!all(Strategy::Sequential, 0..100, |i| i < 99));
    }
}
