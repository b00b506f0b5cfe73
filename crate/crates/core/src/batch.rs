//! Chunked batch execution.
//!
//! Work items are split into chunks whose modeled working set fits a byte
//! budget (the default mirrors a 16 kB shared-memory bank) and chunks are
//! handed to a dedicated rayon pool. Chunking only affects scheduling:
//! each output slot is written by exactly one task and results come back
//! in input order, so output never depends on the thread count.

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{invalid, Result};

pub const DEFAULT_CHUNK_BYTES: usize = 16 * 1024;

#[derive(Debug)]
pub struct Executor {
    threads: usize,
    chunk_bytes: usize,
    pool: ThreadPool,
}

impl Executor {
    /// `threads == 0` selects rayon's default (one per core).
    pub fn new(threads: usize) -> Result<Self> {
        Self::with_chunk_bytes(threads, DEFAULT_CHUNK_BYTES)
    }

    pub fn with_chunk_bytes(threads: usize, chunk_bytes: usize) -> Result<Self> {
        if chunk_bytes == 0 {
            return Err(invalid("chunk byte budget must be positive"));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| invalid(format!("cannot build thread pool: {e}")))?;
        Ok(Self {
            threads: pool.current_num_threads(),
            chunk_bytes,
            pool,
        })
    }

    pub fn sequential() -> Self {
        Self::new(1).expect("single-thread pool")
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn chunk_bytes(&self) -> usize {
        self.chunk_bytes
    }

    /// Items per chunk for items of the given modeled size.
    pub fn chunk_len(&self, item_bytes: usize) -> usize {
        (self.chunk_bytes / item_bytes.max(1)).max(1)
    }

    /// Maps `f` over `items`, chunk by chunk, preserving order.
    pub fn map<I, O, F>(&self, items: &[I], item_bytes: usize, f: F) -> Vec<O>
    where
        I: Sync,
        O: Send,
        F: Fn(&I) -> O + Sync + Send,
    {
        let len = self.chunk_len(item_bytes);
        self.pool.install(|| {
            items
                .par_chunks(len)
                .flat_map_iter(|chunk| chunk.iter().map(&f).collect::<Vec<_>>())
                .collect()
        })
    }

    /// Applies `f` to every output slot alongside its input, chunk by chunk.
    pub fn zip_apply<I, O, F>(&self, items: &[I], out: &mut [O], item_bytes: usize, f: F)
    where
        I: Sync,
        O: Send,
        F: Fn(&I, &mut O) + Sync + Send,
    {
        assert_eq!(items.len(), out.len());
        let len = self.chunk_len(item_bytes);
        self.pool.install(|| {
            items
                .par_chunks(len)
                .zip(out.par_chunks_mut(len))
                .for_each(|(ins, outs)| {
                    for (i, o) in ins.iter().zip(outs.iter_mut()) {
                        f(i, o);
                    }
                })
        })
    }

    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        self.pool.install(op)
    }
}

impl Default for Executor {
    fn default() -> Self {
        Self::new(0).expect("default thread pool")
    }
}
