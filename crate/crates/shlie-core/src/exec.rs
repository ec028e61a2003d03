//! Execution strategy for the data-parallel inner loops.
//!
//! The hot loops (basis-tuple enumeration for identity checks, per-degree
//! differential blocks, table fills) are embarrassingly parallel. With the
//! `parallel` feature enabled (the default) they run on rayon; without it, or
//! with [`Exec::Sequential`], they run on a plain iterator. Results are
//! collected in input order either way, so output is identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.into_par_iter().map(f).collect(),
            #[cfg(not(feature = "parallel"))]
            Exec::Parallel => items.into_iter().map(f).collect(),
        }
    }

    /// Configures the global rayon pool size. `jobs = 1` selects the
    /// sequential strategy outright.
    pub fn with_jobs(jobs: usize) -> Exec {
        if jobs <= 1 {
            return Exec::Sequential;
        }
        #[cfg(feature = "parallel")]
        {
            // Ignore failure: the global pool can only be built once.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
            Exec::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = Exec::Sequential.map(items.clone(), |x| x * 2);
        let par = Exec::Parallel.map(items, |x| x * 2);
        assert_eq!(seq, par);
    }
}
