//! Data-parallel map helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) these fan out over rayon's global
//! pool; without it they run sequentially with identical semantics.  Results
//! are always collected in input order, so reductions over the output are
//! deterministic regardless of thread count.

use crate::error::Result;

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Like [`map`], but short-circuits on the first error.  Which error is
/// returned may vary under parallelism; the `Ok` payload never does.
#[cfg(feature = "parallel")]
pub fn try_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn try_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    F: Fn(&T) -> Result<U>,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn map_preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let out = map(&items, |&x| x * x);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, (i * i) as u64);
        }
    }

    #[test]
    fn try_map_collects_ok_values_in_order() {
        let items: Vec<i32> = (1..=100).collect();
        let out = try_map(&items, |&x| Ok(2 * x)).unwrap();
        assert_eq!(out[0], 2);
        assert_eq!(out[99], 200);
    }

    #[test]
    fn try_map_propagates_errors() {
        let items: Vec<i32> = (0..50).collect();
        let r = try_map(&items, |&x| {
            if x == 33 {
                Err(Error::Range("bad"))
            } else {
                Ok(x)
            }
        });
        assert!(r.is_err());
    }
}
