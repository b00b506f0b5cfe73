//! Analytical throughput model of a GPU-style chip.
//!
//! Bandwidth figures use modeled bytes (expansion reads plus result
//! writes), not hardware memory transactions; segment and coalescing
//! effects are outside the model.

use serde::{Deserialize, Serialize};

use crate::counters::KernelCounters;
use crate::error::{invalid, Error, Result};

/// Chip description; the JSON form uses exactly these field names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChipSpec {
    pub clock_ghz: f64,
    pub tpc_count: u32,
    pub sm_per_tpc: u32,
    pub sp_per_sm: u32,
    pub sfu_per_sm: u32,
    pub sp_flops_per_cycle: u32,
    pub sfu_flops_per_cycle: u32,
    pub dp_fpu_per_sm: u32,
    pub dp_flops_per_cycle: u32,
    pub max_threads_per_sm: u32,
    pub max_blocks_per_sm: u32,
    pub shared_mem_bytes_per_sm: u32,
}

const GT200_JSON: &str = include_str!("../data/gt200.json");

impl ChipSpec {
    /// The bundled GT200 description.
    pub fn gt200() -> Self {
        Self::from_json(GT200_JSON).expect("bundled spec is valid")
    }

    pub fn bundled_json() -> &'static str {
        GT200_JSON
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ChipSpec = serde_json::from_str(text).map_err(|e| Error::ChipSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.clock_ghz.is_finite() && self.clock_ghz > 0.0) {
            return Err(Error::ChipSpec(format!(
                "field `clock_ghz` must be positive, got {}",
                self.clock_ghz
            )));
        }
        let counts = [
            ("tpc_count", self.tpc_count),
            ("sm_per_tpc", self.sm_per_tpc),
            ("sp_per_sm", self.sp_per_sm),
            ("sfu_per_sm", self.sfu_per_sm),
            ("sp_flops_per_cycle", self.sp_flops_per_cycle),
            ("sfu_flops_per_cycle", self.sfu_flops_per_cycle),
            ("dp_fpu_per_sm", self.dp_fpu_per_sm),
            ("dp_flops_per_cycle", self.dp_flops_per_cycle),
            ("max_threads_per_sm", self.max_threads_per_sm),
            ("max_blocks_per_sm", self.max_blocks_per_sm),
            ("shared_mem_bytes_per_sm", self.shared_mem_bytes_per_sm),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::ChipSpec(format!("field `{name}` must be positive")));
            }
        }
        Ok(())
    }

    pub fn sm_count(&self) -> u32 {
        self.tpc_count * self.sm_per_tpc
    }
}

/// Peak rates in Gflop/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub sp_gflops: f64,
    pub sfu_gflops: f64,
    /// `sp_gflops + sfu_gflops`.
    pub combined_gflops: f64,
    pub dp_gflops: f64,
}

pub fn peak_throughput(chip: &ChipSpec) -> PeakReport {
    let per_cycle = chip.clock_ghz * chip.sm_count() as f64;
    let sp = per_cycle * (chip.sp_per_sm * chip.sp_flops_per_cycle) as f64;
    let sfu = per_cycle * (chip.sfu_per_sm * chip.sfu_flops_per_cycle) as f64;
    let dp = per_cycle * (chip.dp_fpu_per_sm * chip.dp_flops_per_cycle) as f64;
    PeakReport {
        sp_gflops: sp,
        sfu_gflops: sfu,
        combined_gflops: sp + sfu,
        dp_gflops: dp,
    }
}

/// Active threads as a fraction of the per-multiprocessor maximum.
pub fn occupancy(active_threads: u32, max_threads: u32) -> Result<f64> {
    if max_threads == 0 {
        return Err(invalid("max_threads must be positive"));
    }
    if active_threads > max_threads {
        return Err(invalid(format!(
            "{active_threads} active threads exceed the maximum of {max_threads}"
        )));
    }
    Ok(active_threads as f64 / max_threads as f64)
}

/// How many items of `item_bytes` fit in shared memory after `reserved_bytes`.
pub fn shared_fit(item_bytes: u64, shared_bytes: u64, reserved_bytes: u64) -> Result<u64> {
    if item_bytes == 0 {
        return Err(invalid("item_bytes must be positive"));
    }
    if reserved_bytes >= shared_bytes {
        return Err(invalid(format!(
            "reserved {reserved_bytes} bytes leave nothing of {shared_bytes}"
        )));
    }
    Ok((shared_bytes - reserved_bytes) / item_bytes)
}

/// Achieved rates of one kernel run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelMetrics {
    pub gops: f64,
    pub gbps: f64,
    pub items_per_second: f64,
}

pub fn kernel_metrics(counters: &KernelCounters, items: u64) -> Result<KernelMetrics> {
    let t = counters.elapsed_seconds;
    if !(t.is_finite() && t > 0.0) {
        return Err(invalid(format!("elapsed time must be positive, got {t}")));
    }
    Ok(KernelMetrics {
        gops: counters.arithmetic_ops as f64 / t / 1e9,
        gbps: counters.bytes_moved() as f64 / t / 1e9,
        items_per_second: items as f64 / t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_decimals(x: f64) -> f64 {
        (x * 100.0).round() / 100.0
    }

    #[test]
    fn gt200_peaks() {
        let r = peak_throughput(&ChipSpec::gt200());
        assert_eq!(two_decimals(r.sp_gflops), 622.08);
        assert_eq!(two_decimals(r.sfu_gflops), 311.04);
        assert_eq!(two_decimals(r.combined_gflops), 933.12);
        assert_eq!(two_decimals(r.dp_gflops), 77.76);
        assert_eq!(r.combined_gflops, r.sp_gflops + r.sfu_gflops);
    }

    #[test]
    fn unit_chip() {
        let one = ChipSpec {
            clock_ghz: 1.0,
            tpc_count: 1,
            sm_per_tpc: 1,
            sp_per_sm: 1,
            sfu_per_sm: 1,
            sp_flops_per_cycle: 1,
            sfu_flops_per_cycle: 1,
            dp_fpu_per_sm: 1,
            dp_flops_per_cycle: 1,
            max_threads_per_sm: 1,
            max_blocks_per_sm: 1,
            shared_mem_bytes_per_sm: 1,
        };
        assert_eq!(peak_throughput(&one).sp_gflops, 1.0);
        let doubled = ChipSpec { sm_per_tpc: 2, ..one };
        assert_eq!(peak_throughput(&doubled).dp_gflops, 2.0);
    }

    #[test]
    fn occupancy_examples() {
        assert_eq!(occupancy(216, 1024).unwrap(), 0.2109375);
        assert_eq!(occupancy(0, 1024).unwrap(), 0.0);
        assert_eq!(occupancy(1024, 1024).unwrap(), 1.0);
        assert!(occupancy(1025, 1024).is_err());
    }

    #[test]
    fn shared_fit_examples() {
        assert_eq!(shared_fit(2304, 16384, 2048).unwrap(), 6);
        assert_eq!(shared_fit(1, 16384, 0).unwrap(), 16384);
        assert_eq!(shared_fit(16384, 16384, 0).unwrap(), 1);
        assert!(shared_fit(0, 16384, 0).is_err());
    }

    #[test]
    fn metrics_examples() {
        let c = KernelCounters {
            arithmetic_ops: 1_000_000_000,
            bytes_read: 1_500_000_000,
            bytes_written: 500_000_000,
            elapsed_seconds: 1.0,
        };
        let m = kernel_metrics(&c, 10).unwrap();
        assert_eq!(m.gops, 1.0);
        assert_eq!(m.gbps, 2.0);
        let t = KernelCounters {
            elapsed_seconds: 1.44e-2,
            ..Default::default()
        };
        let rate = kernel_metrics(&t, 2_359_152).unwrap().items_per_second;
        assert!((rate / 1e6 - 163.83).abs() < 0.01);
        assert!(kernel_metrics(&KernelCounters::default(), 1).is_err());
    }

    #[test]
    fn parse_errors_name_the_field() {
        let text = ChipSpec::bundled_json().replace("\"sp_per_sm\": 8,", "");
        let err = ChipSpec::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("sp_per_sm"), "{err}");
        let text = ChipSpec::bundled_json().replace("\"tpc_count\": 10", "\"tpc_count\": 0");
        assert!(ChipSpec::from_json(&text).unwrap_err().to_string().contains("tpc_count"));
        let extra = ChipSpec::bundled_json().replace("{", "{\"bogus\": 1,");
        assert!(ChipSpec::from_json(&extra).unwrap_err().to_string().contains("bogus"));
    }
}
