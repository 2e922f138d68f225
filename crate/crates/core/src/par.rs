//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over a rayon pool;
//! without it, or with [`Parallelism::Sequential`], everything runs on the
//! calling thread. Results are always returned in input order, so callers
//! see identical output either way.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    /// Number of worker threads; `0` lets rayon decide.
    #[default]
    Auto,
    Threads(usize),
}

impl Parallelism {
    pub fn from_jobs(jobs: Option<usize>) -> Self {
        match jobs {
            None => Parallelism::Auto,
            Some(0) => Parallelism::Auto,
            Some(1) => Parallelism::Sequential,
            Some(k) => Parallelism::Threads(k),
        }
    }
}

pub struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    pub fn new(mode: Parallelism) -> Self {
        #[cfg(feature = "parallel")]
        {
            let threads = match mode {
                Parallelism::Sequential => return Executor { pool: None },
                Parallelism::Auto => 0,
                Parallelism::Threads(k) => k,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .ok();
            Executor { pool }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = mode;
            Executor {}
        }
    }

    pub fn sequential() -> Self {
        Self::new(Parallelism::Sequential)
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }
}
