//! Order-preserving map over independent work items, parallel with the
//! `parallel` feature and sequential otherwise.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential map.
pub fn seq_map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    F: Fn(&I) -> O,
{
    items.iter().map(f).collect()
}

/// Parallel map; output order matches input order.
#[cfg(feature = "parallel")]
pub fn par_map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Parallel when the `parallel` feature is on.
pub fn map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        par_map(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq_map(items, f)
    }
}
