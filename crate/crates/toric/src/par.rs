//! Optional data parallelism. Every parallel site in the library funnels
//! through [`par_map`], which preserves input order, so parallel and
//! sequential runs produce identical results. The thread count comes from the
//! TORIC_THREADS environment variable (default 1 = sequential); building
//! without the `parallel` feature removes the dependency entirely.

use std::sync::OnceLock;

pub fn configured_threads() -> usize {
    static N: OnceLock<usize> = OnceLock::new();
    *N.get_or_init(|| {
        std::env::var("TORIC_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
            .filter(|&n| n >= 1)
            .unwrap_or(1)
    })
}

#[cfg(feature = "parallel")]
mod imp {
    use std::sync::OnceLock;

    fn pool() -> &'static rayon::ThreadPool {
        static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
        POOL.get_or_init(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(super::configured_threads())
                .build()
                .expect("failed to build worker pool")
        })
    }

    pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
        use rayon::prelude::*;
        if super::configured_threads() <= 1 {
            return items.iter().map(f).collect();
        }
        pool().install(|| items.par_iter().map(&f).collect())
    }
}

#[cfg(not(feature = "parallel"))]
mod imp {
    pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
        items.iter().map(f).collect()
    }
}

pub use imp::par_map;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let items: Vec<u64> = (0..100).collect();
        let out = par_map(&items, |x| x * x);
        let seq: Vec<u64> = items.iter().map(|x| x * x).collect();
        assert_eq!(out, seq);
    }
}
