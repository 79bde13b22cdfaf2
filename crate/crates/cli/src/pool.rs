//! Worker pool for independent sweep points.

use rayon::prelude::*;

pub const THREADS_ENV: &str = "CASCADE_LAB_THREADS";

/// Worker count: available parallelism, capped by `CASCADE_LAB_THREADS`.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => available.min(cap),
        _ => available,
    }
}

/// Maps `f` over `items` on the pool; results keep the order of `items`.
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match rayon::ThreadPoolBuilder::new().num_threads(worker_count()).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..50).collect();
        let out = map_ordered(&items, |&k| k * k);
        assert_eq!(out, items.iter().map(|k| k * k).collect::<Vec<_>>());
        assert!(worker_count() >= 1);
    }
}
