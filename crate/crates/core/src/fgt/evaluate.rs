use std::time::Instant;

use crate::batch::Executor;
use crate::counters::KernelCounters;
use crate::dataset::GaussianSource;
use crate::error::{invalid, Result};

use super::cost::{
    direct_cost, hermite_eval_cost, hermite_form_cost, strategy_costs, taylor_eval_cost,
    taylor_form_cost, translate_cost,
};
use super::direct::direct_at;
use super::expansion::{
    h2t_translate, hermite_coeffs_iter, hermite_eval_with, scale_factor, taylor_coeffs_iter,
    taylor_eval_with, HermiteExpansion, TaylorExpansion,
};
use super::grid::{build_fgt_grid, neighbor_cutoff, FgtGrid};
use super::{FgtConfig, Strategy};

/// Result of one fast Gauss transform.
#[derive(Debug, Clone, PartialEq)]
pub struct FgtOutput {
    /// `G` at every target, in input order.
    pub values: Vec<f64>,
    /// Modeled work of the evaluation; wall time excludes planning.
    pub counters: KernelCounters,
    /// Box pairs handled by each strategy, in `Strategy::ALL` order.
    pub strategy_counts: [usize; 4],
    /// Grid and interaction planning time, not included in `counters`.
    pub setup_seconds: f64,
}

struct TargetPlan {
    target_box: usize,
    /// `(source box, strategy)`, ascending source box.
    sources: Vec<(usize, Strategy)>,
}

fn plan(grid: &FgtGrid, config: &FgtConfig, forced: Option<Strategy>) -> Vec<TargetPlan> {
    let n_cut = neighbor_cutoff(config);
    let reach: Vec<Vec<usize>> = (0..grid.num_boxes())
        .map(|b| {
            if grid.targets[b].is_empty() {
                return Vec::new();
            }
            grid.window(b, n_cut)
                .into_iter()
                .filter(|&s| !grid.sources[s].is_empty())
                .collect()
        })
        .collect();
    let mut fan_src = vec![0usize; grid.num_boxes()];
    for list in &reach {
        for &s in list {
            fan_src[s] += 1;
        }
    }
    reach
        .into_iter()
        .enumerate()
        .filter(|(_, list)| !list.is_empty())
        .map(|(t, list)| {
            let fan_tgt = list.len() as f64;
            let sources = list
                .into_iter()
                .map(|s| {
                    let strategy = forced.unwrap_or_else(|| {
                        strategy_costs(
                            grid.sources[s].len(),
                            grid.targets[t].len(),
                            config.p,
                            config.dimension,
                            fan_src[s] as f64,
                            fan_tgt,
                        )
                        .cheapest()
                    });
                    (s, strategy)
                })
                .collect();
            TargetPlan {
                target_box: t,
                sources,
            }
        })
        .collect()
}

/// Fast Gauss transform of `sources` at `targets`.
///
/// Every (source box, target box) pair within the neighbor cutoff is handled
/// by the strategy the cost model picks, or by `forced` for all pairs.
/// Hermite expansions are formed once per source box before evaluation;
/// each target box then accumulates its sources in ascending box order.
pub fn fgt_evaluate(
    sources: &[GaussianSource],
    targets: &[Vec<f64>],
    config: &FgtConfig,
    forced: Option<Strategy>,
    exec: &Executor,
) -> Result<FgtOutput> {
    let start = Instant::now();
    let grid = build_fgt_grid(sources, targets, config)?;
    let plans = plan(&grid, config, forced);
    let setup_seconds = start.elapsed().as_secs_f64();
    let eval_start = Instant::now();

    let (p, d, sigma) = (config.p, config.dimension, config.sigma);
    let backend = config.hermite_backend;
    let c = scale_factor(sigma);
    let inv = 1.0 / (2.0 * sigma * sigma);
    let tensor_bytes = p.pow(d as u32) * 8;

    let mut wants_hermite = vec![false; grid.num_boxes()];
    for tp in &plans {
        for &(s, st) in &tp.sources {
            if matches!(st, Strategy::Hermite | Strategy::HermiteToTaylor) {
                wants_hermite[s] = true;
            }
        }
    }
    let hermite_boxes: Vec<usize> = (0..grid.num_boxes()).filter(|&b| wants_hermite[b]).collect();
    let formed: Vec<Result<HermiteExpansion>> = exec.map(&hermite_boxes, tensor_bytes, |&b| {
        hermite_coeffs_iter(grid.sources[b].iter().map(|&i| &sources[i]), &grid.center(b), p, sigma)
    });
    let mut cache: Vec<Option<HermiteExpansion>> = vec![None; grid.num_boxes()];
    for (&b, h) in hermite_boxes.iter().zip(formed) {
        cache[b] = Some(h?);
    }

    let per_target: Vec<Result<Vec<f64>>> = exec.map(&plans, tensor_bytes, |tp| {
        let tb = tp.target_box;
        let members = &grid.targets[tb];
        let center = grid.center(tb);
        let mut values = vec![0.0; members.len()];
        let mut taylor: Option<TaylorExpansion> = None;
        let mut rows = vec![0.0; d * p];
        let mut scratch = Vec::new();
        for &(sb, strategy) in &tp.sources {
            let src = || grid.sources[sb].iter().map(|&i| &sources[i]);
            match strategy {
                Strategy::Direct => {
                    for (v, &j) in values.iter_mut().zip(members) {
                        *v += direct_at(src(), &targets[j], inv);
                    }
                }
                Strategy::Hermite => {
                    let h = cache[sb].as_ref().expect("formed above");
                    for (v, &j) in values.iter_mut().zip(members) {
                        *v += hermite_eval_with(h, &targets[j], c, backend, &mut rows, &mut scratch);
                    }
                }
                Strategy::Taylor => {
                    let t = taylor_coeffs_iter(src(), &center, p, sigma, backend)?;
                    add_taylor(&mut taylor, t)?;
                }
                Strategy::HermiteToTaylor => {
                    let h = cache[sb].as_ref().expect("formed above");
                    add_taylor(&mut taylor, h2t_translate(h, &center, sigma, backend)?)?;
                }
            }
        }
        if let Some(t) = &taylor {
            for (v, &j) in values.iter_mut().zip(members) {
                *v += taylor_eval_with(t, &targets[j], c, &mut rows, &mut scratch);
            }
        }
        Ok(values)
    });

    let mut out = vec![0.0; targets.len()];
    for (tp, values) in plans.iter().zip(per_target) {
        for (&j, v) in grid.targets[tp.target_box].iter().zip(values?) {
            out[j] = v;
        }
    }

    let (counters_model, strategy_counts) = model(&grid, &plans, &hermite_boxes, config);
    let counters = KernelCounters {
        elapsed_seconds: eval_start.elapsed().as_secs_f64(),
        ..counters_model
    };
    Ok(FgtOutput {
        values: out,
        counters,
        strategy_counts,
        setup_seconds,
    })
}

fn add_taylor(acc: &mut Option<TaylorExpansion>, t: TaylorExpansion) -> Result<()> {
    match acc {
        Some(a) => a.accumulate(&t),
        None => {
            *acc = Some(t);
            Ok(())
        }
    }
}

/// Modeled operations and bytes, using the cost-model weights without
/// amortization: each formation and each evaluation counted once.
fn model(grid: &FgtGrid, plans: &[TargetPlan], hermite_boxes: &[usize], config: &FgtConfig) -> (KernelCounters, [usize; 4]) {
    let (p, d) = (config.p as f64, config.dimension as f64);
    let tensor_bytes = p.powf(d) * 8.0;
    let point_bytes = (d + 1.0) * 8.0;
    let mut ops = 0.0;
    let mut read = 0.0;
    let mut written = 0.0;
    let mut counts = [0usize; 4];
    for &b in hermite_boxes {
        let n = grid.sources[b].len() as f64;
        ops += hermite_form_cost(n, p, d);
        read += n * point_bytes;
        written += tensor_bytes;
    }
    for tp in plans {
        let m = grid.targets[tp.target_box].len() as f64;
        let mut has_taylor = false;
        for &(s, strategy) in &tp.sources {
            let n = grid.sources[s].len() as f64;
            counts[strategy.index()] += 1;
            match strategy {
                Strategy::Direct => {
                    ops += direct_cost(n, m, d);
                    read += n * point_bytes + m * d * 8.0;
                }
                Strategy::Hermite => {
                    ops += hermite_eval_cost(m, p, d);
                    read += tensor_bytes + m * d * 8.0;
                }
                Strategy::Taylor => {
                    ops += taylor_form_cost(n, p, d);
                    read += n * point_bytes;
                    has_taylor = true;
                }
                Strategy::HermiteToTaylor => {
                    ops += translate_cost(p, d);
                    read += tensor_bytes;
                    has_taylor = true;
                }
            }
        }
        if has_taylor {
            ops += taylor_eval_cost(m, p, d);
            read += tensor_bytes + m * d * 8.0;
        }
        written += m * 8.0;
    }
    (
        KernelCounters {
            arithmetic_ops: ops.round() as u64,
            bytes_read: read.round() as u64,
            bytes_written: written.round() as u64,
            elapsed_seconds: 0.0,
        },
        counts,
    )
}

/// Evaluates one source set at one target set through a single strategy,
/// with the expansions centered at `source_center` and `target_center`.
pub fn evaluate_pair(
    sources: &[GaussianSource],
    source_center: &[f64],
    targets: &[Vec<f64>],
    target_center: &[f64],
    config: &FgtConfig,
    strategy: Strategy,
) -> Result<Vec<f64>> {
    config.validate()?;
    let d = config.dimension;
    if source_center.len() != d || target_center.len() != d || targets.iter().any(|t| t.len() != d) {
        return Err(invalid("centers and targets must match the configured dimension"));
    }
    let (p, sigma, backend) = (config.p, config.sigma, config.hermite_backend);
    let c = scale_factor(sigma);
    let mut rows = vec![0.0; d * p];
    let mut scratch = Vec::new();
    match strategy {
        Strategy::Direct => super::direct_gauss(sources, targets, sigma),
        Strategy::Hermite => {
            let h = hermite_coeffs_iter(sources.iter(), source_center, p, sigma)?;
            Ok(targets
                .iter()
                .map(|y| hermite_eval_with(&h, y, c, backend, &mut rows, &mut scratch))
                .collect())
        }
        Strategy::Taylor | Strategy::HermiteToTaylor => {
            let t = if strategy == Strategy::Taylor {
                taylor_coeffs_iter(sources.iter(), target_center, p, sigma, backend)?
            } else {
                let h = hermite_coeffs_iter(sources.iter(), source_center, p, sigma)?;
                h2t_translate(&h, target_center, sigma, backend)?
            };
            Ok(targets
                .iter()
                .map(|y| taylor_eval_with(&t, y, c, &mut rows, &mut scratch))
                .collect())
        }
    }
}
