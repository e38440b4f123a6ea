//! Data-parallel map helpers with a sequential fallback.
//!
//! Hot loops in this crate (per-row gradients, per-sample batch gradients,
//! per-prompt extraction, per-input evaluation) are independent-item maps.
//! With the default `parallel` feature they fan out over rayon; without it
//! they run sequentially. Output order always equals input order and each
//! item's computation is internally sequential, so results are bit-identical
//! under either build and any thread count.
//!
//! The `_seq` variants are always sequential regardless of features; the
//! bench suite uses them as the comparison baseline.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Ordered map over a slice.
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_ordered_seq(items, f)
    }
}

/// Sequential ordered map over a slice.
pub fn map_ordered_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Ordered map over indices `0..n`.
pub fn map_indices<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indices_seq(n, f)
    }
}

/// Sequential ordered map over indices `0..n`.
pub fn map_indices_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let items: Vec<u64> = (0..257).collect();
        let f = |x: &u64| x.wrapping_mul(0x9E3779B97F4A7C15).rotate_left(17);
        assert_eq!(map_ordered(&items, f), map_ordered_seq(&items, f));
    }

    #[test]
    fn index_maps_agree() {
        let f = |i: usize| (i as f32).sin();
        assert_eq!(map_indices(100, f), map_indices_seq(100, f));
    }
}
