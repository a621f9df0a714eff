//! Range partitioning and thread-pool plumbing shared by the scans.
//!
//! Work is split into fixed, schedule-independent chunks and results are
//! collected in chunk order, so every reduction sees the same inputs in the
//! same order whatever the thread count.

use rayon::prelude::*;

use crate::sieve::{Sieve, DEFAULT_SEGMENT_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub sieve: Sieve,
    /// Integers per work chunk.
    pub chunk_size: u64,
    /// Worker threads; 0 means one per available core.
    pub parallelism: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { sieve: Sieve::default(), chunk_size: DEFAULT_SEGMENT_SIZE, parallelism: 0 }
    }
}

impl ScanConfig {
    pub fn with_parallelism(mut self, parallelism: usize) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Self {
        self.chunk_size = chunk_size.max(1);
        self
    }

    pub fn with_segment_size(mut self, segment_size: u64) -> Self {
        self.sieve = Sieve::new(segment_size);
        self
    }

    /// Splits `[lo, hi]` into consecutive closed chunks of at most `size` integers.
    pub fn partition(lo: u64, hi: u64, size: u64) -> Vec<(u64, u64)> {
        let size = size.max(1);
        let mut out = Vec::new();
        let mut a = lo;
        while a <= hi {
            let b = hi.min(a.saturating_add(size - 1));
            out.push((a, b));
            if b == hi {
                break;
            }
            a = b + 1;
        }
        out
    }

    /// Maps `f` over `chunks` on this config's pool, preserving chunk order.
    pub fn map_chunks<R, F>(&self, chunks: &[(u64, u64)], f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64, u64) -> R + Sync + Send,
    {
        let run = || chunks.par_iter().map(|&(a, b)| f(a, b)).collect();
        if self.parallelism == 0 {
            return run();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.parallelism).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                log::warn!("could not build a {}-thread pool ({e}); using the global pool", self.parallelism);
                run()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_covers_range() {
        assert_eq!(ScanConfig::partition(2, 11, 4), vec![(2, 5), (6, 9), (10, 11)]);
        assert_eq!(ScanConfig::partition(5, 5, 4), vec![(5, 5)]);
        assert!(ScanConfig::partition(6, 5, 4).is_empty());
        let top = u64::MAX - 3;
        assert_eq!(ScanConfig::partition(top, u64::MAX, 10), vec![(top, u64::MAX)]);
    }

    #[test]
    fn map_preserves_order() {
        let chunks = ScanConfig::partition(0, 999, 7);
        let cfg = ScanConfig::default().with_parallelism(4);
        let sums = cfg.map_chunks(&chunks, |a, b| (a..=b).sum::<u64>());
        assert_eq!(sums.iter().sum::<u64>(), 999 * 1000 / 2);
        assert_eq!(sums[0], 21);
    }
}
