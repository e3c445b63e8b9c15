//! Data-parallel driving for the heavy sweeps, with a sequential fallback.
//!
//! Every consumer is deterministic: parallel runs reduce with order-insensitive
//! combiners (conjunction, minimum, ordered collect), so output never depends
//! on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How batch entry points drive their inner loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Rayon work-stealing pool. Falls back to sequential when the
    /// `parallel` feature is compiled out.
    Rayon,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Rayon
        } else {
            Parallelism::Sequential
        }
    }
}

/// Map every item and keep results in input order.
pub fn map_collect<T, U, F>(par: Parallelism, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Does `f` hold for every item?
pub fn all<T, F>(par: Parallelism, items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => items.par_iter().all(f),
        _ => items.iter().all(f),
    }
}

/// Minimum of `f` over items (None entries skipped). Deterministic because
/// min is order-insensitive.
pub fn min_map<T, U, F>(par: Parallelism, items: &[T], f: F) -> Option<U>
where
    T: Sync,
    U: Ord + Send,
    F: Fn(&T) -> Option<U> + Sync,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => items.par_iter().filter_map(f).min(),
        _ => items.iter().filter_map(f).min(),
    }
}

/// First counterexample by input order (deterministic even in parallel:
/// the least index among failures is reduced with min).
pub fn find_first_failure<T, F>(par: Parallelism, items: &[T], ok: F) -> Option<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync,
{
    match par {
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => items
            .par_iter()
            .enumerate()
            .filter_map(|(i, t)| if ok(t) { None } else { Some(i) })
            .min(),
        _ => items.iter().position(|t| !ok(t)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let items: Vec<i64> = (0..1000).collect();
        for par in [Parallelism::Sequential, Parallelism::Rayon] {
            assert_eq!(map_collect(par, &items, |x| x * x), items.iter().map(|x| x * x).collect::<Vec<_>>());
            assert!(all(par, &items, |x| *x >= 0));
            assert_eq!(min_map(par, &items, |x| if *x > 500 { Some(*x) } else { None }), Some(501));
            assert_eq!(find_first_failure(par, &items, |x| *x != 713), Some(713));
        }
    }
}
