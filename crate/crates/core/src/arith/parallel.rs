use rayon::prelude::*;

use super::mp;

/// Order-preserving parallel map over a worker pool.
///
/// Each job first inherits the caller's multiprecision context, so results
/// are bitwise independent of the worker count even when the global pool is
/// reused across runs with different precisions.
pub fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let bits = mp::thread_precision();
    items
        .par_iter()
        .map(|item| {
            mp::set_thread_precision(bits);
            f(item)
        })
        .collect()
}

/// Install the global worker pool. Call once at startup; later calls fail
/// silently (the pool cannot be resized after first use).
pub fn install_thread_pool(threads: usize) {
    if threads == 0 {
        return;
    }
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{MpFloat, Scalar};

    #[test]
    fn preserves_order() {
        let items: Vec<usize> = (0..1000).collect();
        let out = parallel_map(&items, |&i| i * i);
        assert_eq!(out, items.iter().map(|&i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn workers_inherit_precision() {
        mp::with_precision(170, || {
            let items: Vec<f64> = (0..64).map(|i| 0.1 * i as f64).collect();
            let out = parallel_map(&items, |&x| {
                let (s, _) = MpFloat::from_f64(x).sin_cos();
                (s.prec_bits(), s.to_decimal_string())
            });
            let serial: Vec<_> = items
                .iter()
                .map(|&x| {
                    let (s, _) = MpFloat::from_f64(x).sin_cos();
                    (s.prec_bits(), s.to_decimal_string())
                })
                .collect();
            assert_eq!(out, serial);
            assert!(out.iter().all(|(p, _)| *p == 170));
        });
    }
}
