//! Rayon-backed executor for operator applications.

use anneal_core::{Executor, Scalar};
use rayon::prelude::*;

/// Splits the output into chunks processed on the current rayon pool.
///
/// Each output entry is computed independently, so results do not depend on
/// the number of threads.
#[derive(Debug, Clone, Copy)]
pub struct Parallel {
    min_chunk: usize,
}

impl Parallel {
    pub fn new() -> Self {
        Parallel { min_chunk: 1 << 12 }
    }

    pub fn with_min_chunk(min_chunk: usize) -> Self {
        Parallel { min_chunk: min_chunk.max(1) }
    }
}

impl Default for Parallel {
    fn default() -> Self {
        Self::new()
    }
}

impl Executor for Parallel {
    fn fill<T, F>(&self, out: &mut [T], f: F)
    where
        T: Scalar,
        F: Fn(usize, &mut [T]) + Sync,
    {
        let threads = rayon::current_num_threads();
        if threads <= 1 || out.len() <= self.min_chunk {
            return f(0, out);
        }
        let chunk = (out.len() / (4 * threads)).max(self.min_chunk);
        out.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i * chunk, c));
    }
}
