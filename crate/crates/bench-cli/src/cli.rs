use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fastsum::fgt::{HermiteBackend, Strategy};
use fastsum::fmm::Traversal;
use fastsum::{Precision, WeightMode};

/// Largest problem the direct oracle is run on.
pub const ORACLE_CAP: usize = 16384;

/// Default `bench m2l` workload sizes: 27 translations for every box of levels 2 through L, L = 3..=8.
pub const DEFAULT_TRANSLATIONS: [usize; 6] = [2160, 9072, 36720, 147_312, 589_680, 2_359_152];

#[derive(Debug, Parser)]
#[command(name = "fastsum", version, about = "Fast summation kernels: checks and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-level FMM for the Cauchy kernel on a seeded unit-square cloud.
    Fmm(FmmArgs),
    /// Fast Gauss transform on a seeded unit-cube cloud.
    Fgt(FgtArgs),
    /// Kernel benchmarks.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Peak throughput, occupancy and shared-memory fit of a chip.
    Perf(PerfArgs),
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Batched multipole-to-local translation over idealized interaction lists.
    M2l(M2lArgs),
    /// Hermite series evaluation (every box pair forced through Hermite expansions).
    Hermite(HermiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionArg {
    F32,
    F64,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::F32 => Precision::F32,
            PrecisionArg::F64 => Precision::F64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraversalArg {
    Row,
    Diagonal,
}

impl From<TraversalArg> for Traversal {
    fn from(t: TraversalArg) -> Self {
        match t {
            TraversalArg::Row => Traversal::Row,
            TraversalArg::Diagonal => Traversal::Diagonal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightArg {
    Unit,
    Uniform01,
    Signed,
}

impl From<WeightArg> for WeightMode {
    fn from(w: WeightArg) -> Self {
        match w {
            WeightArg::Unit => WeightMode::Unit,
            WeightArg::Uniform01 => WeightMode::Uniform01,
            WeightArg::Signed => WeightMode::Signed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum BackendArg {
    Recurrence,
    HornerTable,
}

impl From<BackendArg> for HermiteBackend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Recurrence => HermiteBackend::Recurrence,
            BackendArg::HornerTable => HermiteBackend::HornerTable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum StrategyArg {
    Auto,
    Direct,
    Hermite,
    Taylor,
    HermiteToTaylor,
}

impl StrategyArg {
    pub fn forced(self) -> Option<Strategy> {
        match self {
            StrategyArg::Auto => None,
            StrategyArg::Direct => Some(Strategy::Direct),
            StrategyArg::Hermite => Some(Strategy::Hermite),
            StrategyArg::Taylor => Some(Strategy::Taylor),
            StrategyArg::HermiteToTaylor => Some(Strategy::HermiteToTaylor),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Dataset seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare against the direct oracle and report the error.
    #[arg(long)]
    pub check: bool,
    /// Fail (exit 1) when a checked error exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::F64)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FmmArgs {
    /// Particles.
    #[arg(long, default_value_t = 2048)]
    pub n: usize,
    /// Expansion terms; several values need --sweep.
    #[arg(long, value_delimiter = ',', default_value = "16")]
    pub p: Vec<usize>,
    /// Grid level (4^level boxes), at least 2.
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[arg(long, value_enum, default_value_t = TraversalArg::Row)]
    pub traversal: TraversalArg,
    #[arg(long, value_enum, default_value_t = WeightArg::Unit)]
    pub weights: WeightArg,
    /// One row per value of --p; implies --check.
    #[arg(long)]
    pub sweep: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FgtArgs {
    /// Sources.
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    /// Separate random targets; by default the sources are the targets.
    #[arg(long)]
    pub targets: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    /// Terms per dimension; several values need --sweep.
    #[arg(long, value_delimiter = ',', default_value = "12")]
    pub p: Vec<usize>,
    /// Box side in units of sqrt(2) sigma.
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub eps_cut: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Recurrence)]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = WeightArg::Unit)]
    pub weights: WeightArg,
    /// One row per value of --p; implies --check.
    #[arg(long)]
    pub sweep: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct M2lArgs {
    #[arg(long, value_delimiter = ',', default_value = "8,12,16")]
    pub terms: Vec<usize>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "2160,9072,36720,147312,589680,2359152"
    )]
    pub translations: Vec<usize>,
    #[arg(long, value_enum, default_value_t = TraversalArg::Row)]
    pub traversal: TraversalArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HermiteArgs {
    #[arg(long, value_delimiter = ',', default_value = "5,9,12")]
    pub terms: Vec<usize>,
    /// Sources and targets per cell.
    #[arg(long, value_delimiter = ',', default_value = "4096")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Recurrence)]
    pub backend: BackendArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PerfArgs {
    /// Chip spec JSON file; `gt200` (or a missing `gt200.json`) selects the bundled spec.
    #[arg(long, default_value = "gt200")]
    pub chip: String,
    /// Active threads per multiprocessor for the occupancy figure.
    #[arg(long)]
    pub active: Option<u32>,
    /// Thread limit for the occupancy figure; defaults to the chip's.
    #[arg(long)]
    pub max: Option<u32>,
    /// Item size for the shared-memory fit.
    #[arg(long)]
    pub item_bytes: Option<u64>,
    /// Shared memory per multiprocessor; defaults to the chip's.
    #[arg(long)]
    pub shared: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub reserved: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
