//! Fast summation kernels.
//!
//! * [`fmm`]: single-level 2D fast multipole method for the Cauchy kernel,
//!   built around a batched multipole-to-local translation.
//! * [`fgt`]: fast Gauss transform in one to three dimensions with direct,
//!   Hermite, Taylor and Hermite-to-Taylor interactions.
//! * [`perfmodel`]: peak throughput, occupancy and achieved-rate metrics.
//!
//! The remaining modules hold the shared numerics: multi-indices,
//! factorials and binomials, Horner evaluation, seeded datasets and the
//! chunked batch executor.

#![allow(clippy::needless_range_loop)]

pub mod batch;
pub mod combinatorics;
pub mod counters;
pub mod dataset;
pub mod error;
pub mod fgt;
pub mod fmm;
pub mod horner;
pub mod multi_index;
pub mod perfmodel;
pub mod real;

pub use batch::Executor;
pub use counters::KernelCounters;
pub use dataset::{BoxDomain, DatasetSpec, GaussianSource, Particle, WeightMode};
pub use error::{Error, Result};
pub use real::{Complex, Complex64, Precision, Real};

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
