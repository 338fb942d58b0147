//! Data-parallel helpers.
//!
//! The heavy inner loops (pentagon instances, free-module decompositions,
//! suite instances) are pure functions over immutable shared data, so they
//! map cleanly onto rayon. With the `parallel` feature disabled everything
//! runs sequentially through the same entry points, and benches can force
//! the sequential path at runtime to compare the two.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Run `f` with parallelism disabled on this thread (nested rayon calls
/// started from it fall back to plain iteration). Used by benches and tests.
pub fn with_sequential<T>(f: impl FnOnce() -> T) -> T {
    FORCE_SEQUENTIAL.with(|s| {
        let prev = s.replace(true);
        let out = f();
        s.set(prev);
        out
    })
}

pub fn sequential_forced() -> bool {
    FORCE_SEQUENTIAL.with(|s| s.get())
}

/// Map over items, in parallel when available, preserving input order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if sequential_forced() {
        items.into_iter().map(f).collect()
    } else {
        items.into_par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// `true` if any item satisfies the predicate.
pub fn any<T, F>(items: Vec<T>, f: F) -> bool
where
    T: Send,
    F: Fn(&T) -> bool + Sync + Send,
{
    map_collect(items, |t| f(&t)).into_iter().any(|b| b)
}
