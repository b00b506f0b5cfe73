use std::time::Instant;

use serde::Serialize;

use fastsum::dataset::{generate_particles, generate_points, generate_sources};
use fastsum::fgt::{direct_gauss, fgt_evaluate, FgtConfig, Strategy};
use fastsum::fmm::{
    direct_field, fmm_evaluate, idealized_plan, level_for_translations, m2l_batch, m2l_element,
    max_relative_error, synthetic_expansions, FmmConfig, M2lBatch, MultipoleExpansion, Square,
    TranslationPlan,
};
use fastsum::perfmodel::{kernel_metrics, occupancy, peak_throughput, shared_fit, ChipSpec, PeakReport};
use fastsum::{BoxDomain, Complex64, DatasetSpec, Executor, KernelCounters, Precision, Real, WeightMode};

use crate::cli::{Common, FgtArgs, FmmArgs, HermiteArgs, M2lArgs, PerfArgs, ORACLE_CAP};
use crate::report::BenchReportRow;
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn core_usage(e: fastsum::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn executor(common: &Common) -> Result<Executor, CliError> {
    Executor::new(common.threads).map_err(core_usage)
}

fn check_common(common: &Common, sweep: bool, size: usize) -> Result<bool, CliError> {
    let check = common.check || sweep;
    if common.tol.is_some() && !check {
        return Err(usage("--tol needs --check"));
    }
    if let Some(t) = common.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage(format!("--tol must be a non-negative number, got {t}")));
        }
    }
    if check && size > ORACLE_CAP {
        return Err(usage(format!(
            "the direct oracle is limited to {ORACLE_CAP} points, got {size}"
        )));
    }
    Ok(check)
}

fn terms_list(p: &[usize], sweep: bool) -> Result<(), CliError> {
    if p.is_empty() || p.contains(&0) {
        return Err(usage("terms must be positive"));
    }
    if p.len() > 1 && !sweep {
        return Err(usage("several --p values need --sweep"));
    }
    Ok(())
}

/// Timer resolution floor, so rates stay finite on trivially small cells.
const MIN_SECONDS: f64 = 1e-9;

struct Cell {
    kernel: &'static str,
    terms: usize,
    items: u64,
    counters: KernelCounters,
    reduction_seconds: Option<f64>,
    setup_seconds: f64,
    max_rel_error: Option<f64>,
}

fn row(cell: Cell, threads: usize, precision: Precision) -> BenchReportRow {
    let counters = KernelCounters {
        elapsed_seconds: cell.counters.elapsed_seconds.max(MIN_SECONDS),
        ..cell.counters
    };
    let m = kernel_metrics(&counters, cell.items).expect("elapsed time is positive");
    BenchReportRow {
        kernel: cell.kernel.to_string(),
        terms: cell.terms,
        items: cell.items,
        kernel_seconds: counters.elapsed_seconds,
        reduction_seconds: cell.reduction_seconds,
        setup_seconds: cell.setup_seconds,
        gops: m.gops,
        gbps: m.gbps,
        items_per_second: m.items_per_second,
        max_rel_error: cell.max_rel_error,
        threads,
        precision: precision.as_str().to_string(),
    }
}

fn spec(count: usize, dimension: usize, seed: u64, weight_mode: WeightMode) -> DatasetSpec {
    DatasetSpec {
        count,
        dimension,
        seed,
        weight_mode,
    }
}

pub fn fmm(args: &FmmArgs) -> Result<Vec<BenchReportRow>, CliError> {
    terms_list(&args.p, args.sweep)?;
    let check = check_common(&args.common, args.sweep, args.n)?;
    if args.level < 2 {
        return Err(usage(format!("--level must be at least 2, got {}", args.level)));
    }
    let exec = executor(&args.common)?;
    let precision: Precision = args.common.precision.into();

    let t0 = Instant::now();
    let particles = generate_particles(
        &spec(args.n, 2, args.common.seed, args.weights.into()),
        &BoxDomain::unit(2),
    )
    .map_err(core_usage)?;
    let setup_seconds = t0.elapsed().as_secs_f64();
    let reference = check.then(|| direct_field(&particles, &exec));

    let mut rows = Vec::new();
    for &p in &args.p {
        let config = FmmConfig {
            traversal: args.traversal.into(),
            ..FmmConfig::new(p, args.level)
        };
        let (field, counters, reduction) = match precision {
            Precision::F64 => {
                let out = fmm_evaluate(&particles, &config, &exec).map_err(core_usage)?;
                (out.field, out.counters, out.reduction_seconds)
            }
            Precision::F32 => {
                let lo: Vec<_> = particles.iter().map(|q| q.cast::<f32>()).collect();
                let out = fmm_evaluate(&lo, &config, &exec).map_err(core_usage)?;
                let wide = out.field.iter().map(|z| fastsum::real::cast_complex(*z)).collect();
                (wide, out.counters, out.reduction_seconds)
            }
        };
        let max_rel_error = match &reference {
            Some(r) => Some(max_relative_error(&field, r).map_err(core_usage)?),
            None => None,
        };
        rows.push(row(
            Cell {
                kernel: "fmm",
                terms: p,
                items: args.n as u64,
                counters,
                reduction_seconds: Some(reduction),
                setup_seconds,
                max_rel_error,
            },
            exec.threads(),
            precision,
        ));
    }
    Ok(rows)
}

fn f64_only(common: &Common, what: &str) -> Result<(), CliError> {
    if common.precision != crate::cli::PrecisionArg::F64 {
        return Err(usage(format!("{what} runs in f64 only")));
    }
    Ok(())
}

fn gauss_error(values: &[f64], exact: &[f64]) -> f64 {
    let scale = exact.iter().map(|g| g.abs()).fold(0.0, f64::max);
    let err = values
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

pub fn fgt(args: &FgtArgs) -> Result<Vec<BenchReportRow>, CliError> {
    terms_list(&args.p, args.sweep)?;
    f64_only(&args.common, "fgt")?;
    let m = args.targets.unwrap_or(args.n);
    let check = check_common(&args.common, args.sweep, args.n.max(m))?;
    let configs: Vec<FgtConfig> = args
        .p
        .iter()
        .map(|&p| FgtConfig {
            r: args.r,
            eps_cut: args.eps_cut,
            hermite_backend: args.backend.into(),
            ..FgtConfig::new(args.sigma, p, args.dim)
        })
        .collect();
    for c in &configs {
        c.validate().map_err(core_usage)?;
    }
    let exec = executor(&args.common)?;
    let domain = BoxDomain::unit(args.dim);

    let t0 = Instant::now();
    let sources = generate_sources(
        &spec(args.n, args.dim, args.common.seed, args.weights.into()),
        &domain,
    )
    .map_err(core_usage)?;
    let targets = match args.targets {
        Some(m) => generate_points(
            &spec(m, args.dim, args.common.seed.wrapping_add(1), WeightMode::Unit),
            &domain,
        )
        .map_err(core_usage)?,
        None => sources.iter().map(|s| s.position.clone()).collect(),
    };
    let data_seconds = t0.elapsed().as_secs_f64();
    let exact = if check {
        Some(direct_gauss(&sources, &targets, args.sigma).map_err(core_usage)?)
    } else {
        None
    };

    let mut rows = Vec::new();
    for config in &configs {
        let out = fgt_evaluate(&sources, &targets, config, args.strategy.forced(), &exec)
            .map_err(core_usage)?;
        rows.push(row(
            Cell {
                kernel: "fgt",
                terms: config.p,
                items: targets.len() as u64,
                counters: out.counters,
                reduction_seconds: None,
                setup_seconds: data_seconds + out.setup_seconds,
                max_rel_error: exact.as_ref().map(|e| gauss_error(&out.values, e)),
            },
            exec.threads(),
            Precision::F64,
        ));
    }
    Ok(rows)
}

/// Targets checked against the element-wise oracle per cell.
const M2L_CHECK_TARGETS: usize = 256;

fn m2l_oracle_error<T: Real>(
    plan: &TranslationPlan,
    expansions: &[Option<MultipoleExpansion>],
    batch: &M2lBatch<T>,
) -> f64 {
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for list in plan.lists().iter().take(M2L_CHECK_TARGETS) {
        let le = batch.get(list.target).expect("every planned target is reduced");
        let p = le.coeffs.len();
        for n in 0..p {
            let mut want = Complex64::new(0.0, 0.0);
            for &s in &list.sources {
                let me = expansions[s].as_ref().expect("one expansion per box");
                let t = list.center - me.center;
                for (k, m) in me.coeffs.iter().enumerate() {
                    want += m2l_element(n, k, t).expect("separated centers") * m;
                }
            }
            let got: Complex64 = fastsum::real::cast_complex(le.coeffs[n]);
            err = err.max((got - want).norm());
            scale = scale.max(want.norm());
        }
    }
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

pub fn bench_m2l(args: &M2lArgs) -> Result<Vec<BenchReportRow>, CliError> {
    if args.terms.is_empty() || args.terms.contains(&0) {
        return Err(usage("--terms must be positive"));
    }
    if args.translations.is_empty() || args.translations.contains(&0) {
        return Err(usage("--translations must be positive"));
    }
    let check = check_common(&args.common, false, 0)?;
    let exec = executor(&args.common)?;
    let precision: Precision = args.common.precision.into();
    let domain = Square::unit();
    let traversal = args.traversal.into();

    let mut rows = Vec::new();
    for &p in &args.terms {
        for &count in &args.translations {
            let t0 = Instant::now();
            let level = level_for_translations(count);
            let plan = idealized_plan(level, &domain, count).map_err(core_usage)?;
            let expansions = synthetic_expansions::<f64>(level, &domain, p, args.common.seed);
            let lowered: Vec<Option<MultipoleExpansion<f32>>> = match precision {
                Precision::F32 => expansions
                    .iter()
                    .map(|m| {
                        m.as_ref().map(|m| MultipoleExpansion {
                            center: fastsum::real::cast_complex(m.center),
                            coeffs: m.coeffs.iter().map(|c| fastsum::real::cast_complex(*c)).collect(),
                        })
                    })
                    .collect(),
                Precision::F64 => Vec::new(),
            };
            let setup_seconds = t0.elapsed().as_secs_f64();
            let (counters, reduction, err) = match precision {
                Precision::F64 => {
                    let b = m2l_batch(&plan, &expansions, p, traversal, &exec).map_err(core_usage)?;
                    let err = check.then(|| m2l_oracle_error(&plan, &expansions, &b));
                    (b.counters, b.reduction_seconds, err)
                }
                Precision::F32 => {
                    let b = m2l_batch(&plan, &lowered, p, traversal, &exec).map_err(core_usage)?;
                    let err = check.then(|| m2l_oracle_error(&plan, &expansions, &b));
                    (b.counters, b.reduction_seconds, err)
                }
            };
            rows.push(row(
                Cell {
                    kernel: "m2l",
                    terms: p,
                    items: plan.len() as u64,
                    counters,
                    reduction_seconds: Some(reduction),
                    setup_seconds,
                    max_rel_error: err,
                },
                exec.threads(),
                precision,
            ));
        }
    }
    Ok(rows)
}

pub fn bench_hermite(args: &HermiteArgs) -> Result<Vec<BenchReportRow>, CliError> {
    f64_only(&args.common, "bench hermite")?;
    if args.terms.is_empty() || args.terms.contains(&0) {
        return Err(usage("--terms must be positive"));
    }
    if args.n.is_empty() {
        return Err(usage("--n needs at least one size"));
    }
    let largest = args.n.iter().copied().max().unwrap_or(0);
    let check = check_common(&args.common, false, largest)?;
    let exec = executor(&args.common)?;
    let domain = BoxDomain::unit(args.dim);

    let mut rows = Vec::new();
    for &n in &args.n {
        let t0 = Instant::now();
        let sources = generate_sources(&spec(n, args.dim, args.common.seed, WeightMode::Unit), &domain)
            .map_err(core_usage)?;
        let targets = generate_points(
            &spec(n, args.dim, args.common.seed.wrapping_add(1), WeightMode::Unit),
            &domain,
        )
        .map_err(core_usage)?;
        let data_seconds = t0.elapsed().as_secs_f64();
        let exact = if check {
            Some(direct_gauss(&sources, &targets, args.sigma).map_err(core_usage)?)
        } else {
            None
        };
        for &p in &args.terms {
            let config = FgtConfig {
                hermite_backend: args.backend.into(),
                ..FgtConfig::new(args.sigma, p, args.dim)
            };
            config.validate().map_err(core_usage)?;
            let out = fgt_evaluate(&sources, &targets, &config, Some(Strategy::Hermite), &exec)
                .map_err(core_usage)?;
            rows.push(row(
                Cell {
                    kernel: "hermite",
                    terms: p,
                    items: n as u64,
                    counters: out.counters,
                    reduction_seconds: None,
                    setup_seconds: data_seconds + out.setup_seconds,
                    max_rel_error: exact.as_ref().map(|e| gauss_error(&out.values, e)),
                },
                exec.threads(),
                Precision::F64,
            ));
        }
    }
    Ok(rows)
}

/// Output of `perf`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerfReport {
    pub chip: ChipSpec,
    pub peak: PeakReport,
    pub occupancy: Option<f64>,
    pub shared_fit: Option<u64>,
}

impl PerfReport {
    /// `(metric, value)` pairs in the CSV order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("sp_gflops", self.peak.sp_gflops.to_string()),
            ("sfu_gflops", self.peak.sfu_gflops.to_string()),
            ("combined_gflops", self.peak.combined_gflops.to_string()),
            ("dp_gflops", self.peak.dp_gflops.to_string()),
        ];
        if let Some(o) = self.occupancy {
            out.push(("occupancy", o.to_string()));
        }
        if let Some(f) = self.shared_fit {
            out.push(("shared_fit", f.to_string()));
        }
        out
    }
}

pub fn perf(args: &PerfArgs) -> Result<PerfReport, CliError> {
    let path = std::path::Path::new(&args.chip);
    let chip = if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        ChipSpec::from_json(&text).map_err(core_usage)?
    } else if args.chip == "gt200" || args.chip == "gt200.json" {
        ChipSpec::gt200()
    } else {
        return Err(usage(format!("chip spec {} not found", args.chip)));
    };
    let occupancy = match args.active {
        Some(a) => Some(occupancy(a, args.max.unwrap_or(chip.max_threads_per_sm)).map_err(core_usage)?),
        None if args.max.is_some() => return Err(usage("--max needs --active")),
        None => None,
    };
    let shared_fit = match args.item_bytes {
        Some(b) => Some(
            shared_fit(
                b,
                args.shared.unwrap_or(chip.shared_mem_bytes_per_sm as u64),
                args.reserved,
            )
            .map_err(core_usage)?,
        ),
        None => None,
    };
    Ok(PerfReport {
        peak: peak_throughput(&chip),
        chip,
        occupancy,
        shared_fit,
    })
}
