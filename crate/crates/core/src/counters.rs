use serde::{Deserialize, Serialize};

/// Modeled work and measured wall time of one kernel run.
///
/// Operation and byte counts come from documented per-item models, not
/// hardware counters; see each kernel's `ops` constants.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KernelCounters {
    pub arithmetic_ops: u64,
    pub bytes_read: u64,
    pub bytes_written: u64,
    pub elapsed_seconds: f64,
}

impl KernelCounters {
    pub fn bytes_moved(&self) -> u64 {
        self.bytes_read + self.bytes_written
    }

    /// Adds the counts of `other`; elapsed times add too.
    pub fn accumulate(&mut self, other: &KernelCounters) {
        self.arithmetic_ops += other.arithmetic_ops;
        self.bytes_read += other.bytes_read;
        self.bytes_written += other.bytes_written;
        self.elapsed_seconds += other.elapsed_seconds;
    }
}
