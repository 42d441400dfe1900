use rayon::prelude::*;
use rayon::ThreadPool;
use telegraph_core::montecarlo::ChunkRunner;

use crate::{Error, Result};

/// A rayon pool used both for trajectory chunks and for independent
/// experiment cells. Results always come back in index order.
pub struct Runtime {
    pool: ThreadPool,
}

impl Runtime {
    /// `None` or `Some(0)` lets rayon pick the thread count.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn map<T, F>(&self, n: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(job).collect())
    }
}

impl ChunkRunner for Runtime {
    fn map_chunks<T, F>(&self, n_chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.map(n_chunks, job)
    }
}
