//! Data-parallel helpers with a sequential fallback.
//!
//! Everything funnels through these functions so the `parallel` feature only
//! changes the executor, never the result: outputs are collected in index
//! order in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, returning results in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maps `f` over a slice, returning results in slice order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Like [`map_slice`], with per-worker scratch state from `init`. The
/// state may only affect speed, never the result.
pub fn map_slice_init<S, T, I, INIT, F>(items: &[S], init: INIT, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    INIT: Fn() -> I + Sync + Send,
    F: Fn(&mut I, &S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map_init(init, f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut state = init();
        items.iter().map(|s| f(&mut state, s)).collect()
    }
}

/// Returns the first `Some` produced by `f` over `0..n` in index order.
///
/// In parallel mode all indices may be evaluated, but the lowest index wins,
/// so witnesses are reproducible.
pub fn find_first<T, F>(n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}

/// True when the crate was built with the rayon executor.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
