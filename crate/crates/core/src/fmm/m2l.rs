//! Multipole-to-local translation.
//!
//! The translation is the matrix-vector product `l = A m` with
//! `a_nk = (-1)^n C(n+k, k) t^{-(n+k+1)}`, `t = x_L - x_M`. The matrix is
//! never stored: both traversals generate its entries on the fly while
//! reusing the binomial and power factors of the previous entry.

use std::time::Instant;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::batch::Executor;
use crate::combinatorics::binomial;
use crate::counters::KernelCounters;
use crate::error::{invalid, Error, Result};
use crate::real::{cast_complex, Complex, Real};

use super::expansion::{LocalExpansion, MultipoleExpansion};
use super::ops;
use super::plan::TranslationPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Traversal {
    /// Walk anti-diagonals `n + k = s`; all entries share `t^{-(s+1)}`.
    Diagonal,
    /// One row per output coefficient, powers split into a per-row step
    /// and a common per-column step.
    #[default]
    Row,
}

/// One matrix element, computed from scratch.
pub fn m2l_element<T: Real>(n: usize, k: usize, t: Complex<T>) -> Result<Complex<T>> {
    if t.is_zero() {
        return Err(Error::SingularTranslation);
    }
    let b = binomial((n + k) as u64, k as u64)?;
    let sign = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    let scale = sign * T::from_u64(b).expect("binomial fits the float range");
    Ok(t.inv().powu((n + k + 1) as u32) * scale)
}

/// Translates `me` to a local expansion about `local_center`.
pub fn m2l_translate<T: Real>(
    me: &MultipoleExpansion<T>,
    local_center: Complex<T>,
    traversal: Traversal,
) -> Result<LocalExpansion<T>> {
    let t = local_center - me.center;
    if t.is_zero() {
        return Err(Error::SingularTranslation);
    }
    let mut out = vec![Complex::zero(); me.p()];
    translate_into(&me.coeffs, t, traversal, &mut out);
    Ok(LocalExpansion {
        center: local_center,
        coeffs: out,
    })
}

/// Overwrites `out` with `A(t) m`. `t` must be non-zero.
#[inline]
pub fn translate_into<T: Real>(m: &[Complex<T>], t: Complex<T>, traversal: Traversal, out: &mut [Complex<T>]) {
    debug_assert_eq!(m.len(), out.len());
    match traversal {
        Traversal::Row => translate_rows(m, t, out),
        Traversal::Diagonal => translate_diagonals(m, t, out),
    }
}

fn translate_rows<T: Real>(m: &[Complex<T>], t: Complex<T>, out: &mut [Complex<T>]) {
    let p = m.len();
    let inv_t = t.inv();
    // t^{-(n+1)}, advanced once per row
    let mut row_pow = inv_t;
    for (n, l) in out.iter_mut().enumerate() {
        // k further factors of t^{-1}, identical for every row
        let mut pow = row_pow;
        let mut binom = T::one();
        let mut acc = Complex::zero();
        for (k, mk) in m.iter().enumerate() {
            acc += pow * binom * *mk;
            pow *= inv_t;
            binom = binom * T::from_usize_lossy(n + k + 1) / T::from_usize_lossy(k + 1);
        }
        *l = if n % 2 == 0 { acc } else { -acc };
        row_pow *= inv_t;
    }
    debug_assert_eq!(out.len(), p);
}

fn translate_diagonals<T: Real>(m: &[Complex<T>], t: Complex<T>, out: &mut [Complex<T>]) {
    let p = m.len();
    out.iter_mut().for_each(|l| *l = Complex::zero());
    let inv_t = t.inv();
    // t^{-(s+1)} and C(s, k_lo) for the current diagonal s = n + k
    let mut diag_pow = inv_t;
    let mut edge_binom = T::one();
    for s in 0..2 * p - 1 {
        let k_lo = s.saturating_sub(p - 1);
        let k_hi = s.min(p - 1);
        let mut binom = edge_binom;
        for k in k_lo..=k_hi {
            let n = s - k;
            let term = diag_pow * binom * m[k];
            if n % 2 == 0 {
                out[n] += term;
            } else {
                out[n] -= term;
            }
            binom = binom * T::from_usize_lossy(s - k) / T::from_usize_lossy(k + 1);
        }
        // next diagonal starts at C(s+1, 0) until it reaches the last column,
        // then at C(s+1, p-1) = C(s, p-1) (s+1) / (s+2-p)
        if s + 1 >= p {
            edge_binom = edge_binom * T::from_usize_lossy(s + 1) / T::from_usize_lossy(s + 2 - p);
        }
        diag_pow *= inv_t;
    }
}

/// Output of [`m2l_batch`]: one reduced local expansion per planned target.
#[derive(Debug, Clone, PartialEq)]
pub struct M2lBatch<T = f64> {
    /// `(target box, local expansion)`, ascending target id.
    pub locals: Vec<(usize, LocalExpansion<T>)>,
    /// Translation stage only; `elapsed_seconds` excludes the reduction.
    pub counters: KernelCounters,
    pub reduction_seconds: f64,
}

impl<T> M2lBatch<T> {
    pub fn get(&self, target: usize) -> Option<&LocalExpansion<T>> {
        self.locals
            .binary_search_by_key(&target, |(t, _)| *t)
            .ok()
            .map(|i| &self.locals[i].1)
    }
}

/// Upper bound on translations buffered between the translation and
/// reduction stages.
const STAGE_PAIRS: usize = 1 << 15;

/// Runs every translation in `plan` and reduces them per target.
///
/// `expansions[id]` holds the multipole expansion of box `id`. The batch runs
/// in stages: all translations of a block of targets are written to a
/// scratch buffer, then each target sums its slots in ascending source order.
/// Every target is reduced by exactly one task, so results are bit-identical
/// for any thread count.
pub fn m2l_batch<T: Real>(
    plan: &TranslationPlan,
    expansions: &[Option<MultipoleExpansion<T>>],
    p: usize,
    traversal: Traversal,
    exec: &Executor,
) -> Result<M2lBatch<T>> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    for (source, _) in plan.pairs() {
        match expansions.get(source) {
            Some(Some(me)) if me.p() == p => {}
            Some(Some(me)) => {
                return Err(invalid(format!(
                    "expansion of box {source} has {} terms, expected {p}",
                    me.p()
                )))
            }
            _ => return Err(Error::PlanConsistency { source_box: source }),
        }
    }

    let lists = plan.lists();
    let mut locals: Vec<(usize, LocalExpansion<T>)> = lists
        .iter()
        .map(|l| (l.target, LocalExpansion::zero(cast_complex(l.center), p)))
        .collect();
    let pair_bytes = ops::m2l_bytes_read_per_translation(p, std::mem::size_of::<T>()) as usize;

    let mut translate_seconds = 0.0;
    let mut reduction_seconds = 0.0;
    let mut scratch: Vec<Complex<T>> = Vec::new();
    let mut start = 0;
    while start < lists.len() {
        // block of whole targets holding at most STAGE_PAIRS translations
        let mut end = start;
        let mut pairs = 0;
        while end < lists.len() && (end == start || pairs + lists[end].sources.len() <= STAGE_PAIRS) {
            pairs += lists[end].sources.len();
            end += 1;
        }
        let block = &lists[start..end];
        let jobs: Vec<(usize, Complex<T>)> = block
            .iter()
            .flat_map(|l| {
                let lc = cast_complex::<f64, T>(l.center);
                l.sources.iter().map(move |&s| (s, lc))
            })
            .collect();
        scratch.clear();
        scratch.resize(jobs.len() * p, Complex::zero());

        let t0 = Instant::now();
        exec.install(|| {
            use rayon::prelude::*;
            let chunk = exec.chunk_len(pair_bytes);
            jobs.par_chunks(chunk)
                .zip(scratch.par_chunks_mut(chunk * p))
                .for_each(|(js, outs)| {
                    for (&(s, lc), out) in js.iter().zip(outs.chunks_exact_mut(p)) {
                        let me = expansions[s].as_ref().expect("validated above");
                        translate_into(&me.coeffs, lc - me.center, traversal, out);
                    }
                });
        });
        translate_seconds += t0.elapsed().as_secs_f64();

        let t1 = Instant::now();
        let offsets: Vec<usize> = block
            .iter()
            .scan(0, |acc, l| {
                let o = *acc;
                *acc += l.sources.len();
                Some(o)
            })
            .collect();
        let le_bytes = ops::m2l_bytes_written_per_target(p, std::mem::size_of::<T>()) as usize;
        let items: Vec<(usize, usize)> = block
            .iter()
            .zip(&offsets)
            .map(|(l, &o)| (o, l.sources.len()))
            .collect();
        exec.zip_apply(&items, &mut locals[start..end], le_bytes, |&(o, n), (_, le)| {
            for slot in scratch[o * p..(o + n) * p].chunks_exact(p) {
                for (acc, v) in le.coeffs.iter_mut().zip(slot) {
                    *acc += *v;
                }
            }
        });
        reduction_seconds += t1.elapsed().as_secs_f64();
        start = end;
    }

    let size = std::mem::size_of::<T>();
    let translations = plan.len() as u64;
    let counters = KernelCounters {
        arithmetic_ops: translations * ops::m2l_ops_per_translation(p),
        bytes_read: translations * ops::m2l_bytes_read_per_translation(p, size),
        bytes_written: plan.num_targets() as u64 * ops::m2l_bytes_written_per_target(p, size),
        elapsed_seconds: translate_seconds,
    };
    Ok(M2lBatch {
        locals,
        counters,
        reduction_seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn element_examples() {
        assert_eq!(m2l_element(0, 0, c(2.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert_eq!(m2l_element(1, 1, c(2.0, 0.0)).unwrap(), c(-0.25, 0.0));
        assert_eq!(m2l_element(0, 0, c(0.0, 0.0)), Err(Error::SingularTranslation));
    }

    #[test]
    fn unit_monopole_column() {
        let mut coeffs = vec![c(0.0, 0.0); 8];
        coeffs[0] = c(1.0, 0.0);
        let me = MultipoleExpansion::new(c(0.0, 0.0), coeffs).unwrap();
        for tr in [Traversal::Row, Traversal::Diagonal] {
            let le = m2l_translate(&me, c(2.0, 0.0), tr).unwrap();
            for (n, l) in le.coeffs.iter().enumerate() {
                let want = if n % 2 == 0 { 1.0 } else { -1.0 } * 0.5f64.powi(n as i32 + 1);
                assert_eq!(*l, c(want, 0.0), "n={n} {tr:?}");
            }
        }
    }

    #[test]
    fn matches_elementwise_matrix() {
        let p = 9;
        let m: Vec<Complex64> = (0..p).map(|k| c(0.3 * k as f64 - 1.0, 0.7 - 0.11 * k as f64)).collect();
        let me = MultipoleExpansion::new(c(0.1, 0.2), m.clone()).unwrap();
        let lc = c(2.6, -1.1);
        let t = lc - me.center;
        for tr in [Traversal::Row, Traversal::Diagonal] {
            let le = m2l_translate(&me, lc, tr).unwrap();
            for n in 0..p {
                let want: Complex64 = (0..p).map(|k| m2l_element(n, k, t).unwrap() * m[k]).sum();
                assert!((le.coeffs[n] - want).norm() <= 1e-13 * want.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn coincident_centers() {
        let me = MultipoleExpansion::new(c(1.0, 1.0), vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(
            m2l_translate(&me, c(1.0, 1.0), Traversal::Row),
            Err(Error::SingularTranslation)
        );
    }

    #[test]
    fn batch_reports_missing_expansion() {
        use crate::fmm::plan::InteractionList;
        let plan = TranslationPlan::from_lists(vec![InteractionList {
            target: 0,
            center: c(0.0, 0.0),
            sources: vec![3],
        }])
        .unwrap();
        let exps: Vec<Option<MultipoleExpansion>> = vec![None; 4];
        assert_eq!(
            m2l_batch(&plan, &exps, 4, Traversal::Row, &Executor::sequential()),
            Err(Error::PlanConsistency { source_box: 3 })
        );
    }
}
