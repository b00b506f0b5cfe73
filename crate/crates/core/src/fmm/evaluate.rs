use std::time::Instant;

use num_traits::Zero;

use crate::batch::Executor;
use crate::counters::KernelCounters;
use crate::dataset::Particle;
use crate::error::{invalid, Result};
use crate::real::{cast_complex, Complex, Real};

use super::expansion::{l2p, p2m_indexed, p2p_at, MultipoleExpansion};
use super::m2l::m2l_batch;
use super::plan::far_pairs_single_level;
use super::{bin_particles, ops, FmmConfig};

/// Result of one FMM run.
#[derive(Debug, Clone, PartialEq)]
pub struct FmmOutput<T = f64> {
    /// Field at every particle, in input order.
    pub field: Vec<Complex<T>>,
    /// Whole pipeline: modeled work of every stage, wall time of the run.
    pub counters: KernelCounters,
    /// Translation stage alone, as reported by the batch.
    pub m2l: KernelCounters,
    pub reduction_seconds: f64,
    pub translations: usize,
}

/// Single-level FMM: the field `sum_i q_i / (y - z_i)` at every particle,
/// excluding self-interaction.
pub fn fmm_evaluate<T: Real>(
    particles: &[Particle<T>],
    config: &FmmConfig,
    exec: &Executor,
) -> Result<FmmOutput<T>> {
    config.validate()?;
    let start = Instant::now();
    let p = config.p;
    let grid = bin_particles(particles, config.level, &config.domain)?;

    let box_ids: Vec<usize> = (0..grid.num_boxes()).collect();
    let me_bytes = ops::m2l_bytes_read_per_translation(p, std::mem::size_of::<T>()) as usize;
    let expansions: Vec<Option<MultipoleExpansion<T>>> = exec.map(&box_ids, me_bytes, |&b| {
        let members = &grid.boxes[b].members;
        (!members.is_empty())
            .then(|| p2m_indexed(particles, members, cast_complex(grid.boxes[b].center), p))
    });

    let plan = far_pairs_single_level(&grid);
    let batch = m2l_batch(&plan, &expansions, p, config.traversal, exec)?;

    let occupied: Vec<usize> = box_ids
        .iter()
        .copied()
        .filter(|&b| !grid.boxes[b].members.is_empty())
        .collect();
    let per_box: Vec<(Vec<Complex<T>>, u64)> = exec.map(&occupied, me_bytes, |&b| {
        let neighbors = grid.moore_neighborhood(b);
        let le = batch.get(b);
        let mut pairs = 0u64;
        let values = grid.boxes[b]
            .members
            .iter()
            .map(|&i| {
                let y = particles[i].position;
                let mut f = le.map_or(Complex::zero(), |le| l2p(le, y));
                for &nb in &neighbors {
                    let members = &grid.boxes[nb].members;
                    pairs += members.len() as u64;
                    f += p2p_at(members.iter().map(|&j| &particles[j]), y);
                }
                f
            })
            .collect();
        (values, pairs)
    });

    let mut field = vec![Complex::zero(); particles.len()];
    let mut near_pairs = 0;
    for (&b, (values, pairs)) in occupied.iter().zip(per_box) {
        near_pairs += pairs;
        for (&i, v) in grid.boxes[b].members.iter().zip(values) {
            field[i] = v;
        }
    }

    let n = particles.len() as u64;
    let size = std::mem::size_of::<T>() as u64;
    let evaluated = batch.locals.len() as u64;
    let counters = KernelCounters {
        arithmetic_ops: n * ops::p2m_ops_per_particle(p)
            + batch.counters.arithmetic_ops
            + n * ops::l2p_ops_per_target(p)
            + near_pairs * ops::P2P_OPS_PER_PAIR,
        // particles (position and weight) for P2M and every near-field pair,
        // expansions for the translations and the local evaluations
        bytes_read: (n + near_pairs) * 3 * size
            + batch.counters.bytes_read
            + evaluated * ops::m2l_bytes_written_per_target(p, size as usize),
        bytes_written: occupied.len() as u64 * ops::m2l_bytes_read_per_translation(p, size as usize)
            + batch.counters.bytes_written
            + n * 2 * size,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(FmmOutput {
        field,
        counters,
        m2l: batch.counters,
        reduction_seconds: batch.reduction_seconds,
        translations: plan.len(),
    })
}

/// Brute-force reference for [`fmm_evaluate`]: every pair, self excluded.
pub fn direct_field<T: Real>(particles: &[Particle<T>], exec: &Executor) -> Vec<Complex<T>> {
    let ids: Vec<usize> = (0..particles.len()).collect();
    exec.map(&ids, 16, |&i| p2p_at(particles.iter(), particles[i].position))
}

/// `max_j |f_j - g_j| / max_j |g_j|` with `g` the reference.
pub fn max_relative_error<T: Real>(field: &[Complex<T>], reference: &[Complex<T>]) -> Result<f64> {
    if field.len() != reference.len() {
        return Err(invalid("field and reference lengths differ"));
    }
    let to64 = |z: &Complex<T>| cast_complex::<T, f64>(*z);
    let scale = reference.iter().map(|g| to64(g).norm()).fold(0.0, f64::max);
    let err = field
        .iter()
        .zip(reference)
        .map(|(f, g)| (to64(f) - to64(g)).norm())
        .fold(0.0, f64::max);
    Ok(if scale > 0.0 { err / scale } else { err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_particles, BoxDomain, DatasetSpec, WeightMode};
    use crate::fmm::Traversal;

    fn cloud(n: usize, seed: u64) -> Vec<Particle> {
        let spec = DatasetSpec {
            count: n,
            dimension: 2,
            seed,
            weight_mode: WeightMode::Signed,
        };
        generate_particles(&spec, &BoxDomain::unit(2)).unwrap()
    }

    #[test]
    fn single_particle_has_zero_field() {
        let out = fmm_evaluate(&[Particle::new(0.3, 0.4, 1.0)], &FmmConfig::new(8, 2), &Executor::sequential()).unwrap();
        assert_eq!(out.field, vec![Complex::zero()]);
    }

    #[test]
    fn close_to_direct_sum() {
        let pts = cloud(500, 3);
        let exec = Executor::sequential();
        let reference = direct_field(&pts, &exec);
        for traversal in [Traversal::Row, Traversal::Diagonal] {
            let config = FmmConfig {
                traversal,
                ..FmmConfig::new(16, 3)
            };
            let out = fmm_evaluate(&pts, &config, &exec).unwrap();
            assert!(max_relative_error(&out.field, &reference).unwrap() < 1e-4);
        }
    }

    #[test]
    fn counts_translations() {
        let pts = cloud(300, 5);
        let out = fmm_evaluate(&pts, &FmmConfig::new(8, 3), &Executor::sequential()).unwrap();
        assert_eq!(out.m2l.arithmetic_ops, out.translations as u64 * ops::m2l_ops_per_translation(8));
        assert!(out.counters.arithmetic_ops > out.m2l.arithmetic_ops);
    }

    #[test]
    fn runs_in_single_precision() {
        let pts = cloud(400, 9);
        let exec = Executor::sequential();
        let reference = direct_field(&pts, &exec);
        let lo: Vec<Particle<f32>> = pts.iter().map(|p| p.cast()).collect();
        let out = fmm_evaluate(&lo, &FmmConfig::new(8, 3), &exec).unwrap();
        let wide: Vec<_> = out.field.iter().map(|z| cast_complex::<f32, f64>(*z)).collect();
        assert!(max_relative_error(&wide, &reference).unwrap() < 1e-2);
    }
}
