//! Hermite and Taylor series of the Gaussian kernel.
//!
//! With `c = sqrt(2) sigma` every kernel value is `exp(-|(y - x) / c|^2)`.
//! Coefficient tensors hold `p^d` entries, last dimension fastest.

use crate::dataset::GaussianSource;
use crate::error::{invalid, Result};
use crate::multi_index::tensor_len;

use super::hermite::{fill, HermiteBackend};
use super::tensor::{add_outer, apply_per_mode, contract};

/// `sum_alpha A_alpha h_alpha((y - center) / c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    pub center: Vec<f64>,
    pub p: usize,
    pub coeffs: Vec<f64>,
}

/// `sum_beta B_beta ((y - center) / c)^beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorExpansion {
    pub center: Vec<f64>,
    pub p: usize,
    pub coeffs: Vec<f64>,
}

macro_rules! tensor_common {
    ($t:ty) => {
        impl $t {
            pub fn zero(center: Vec<f64>, p: usize) -> Result<Self> {
                if p == 0 || center.is_empty() {
                    return Err(invalid("expansion needs p >= 1 and a non-empty center"));
                }
                let len = tensor_len(p, center.len())?;
                Ok(Self {
                    center,
                    p,
                    coeffs: vec![0.0; len],
                })
            }

            pub fn dim(&self) -> usize {
                self.center.len()
            }

            /// Adds `other` coefficient-wise; both must share center and shape.
            pub fn accumulate(&mut self, other: &Self) -> Result<()> {
                if self.center != other.center || self.p != other.p {
                    return Err(invalid("cannot add expansions with different centers or sizes"));
                }
                for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
                    *a += b;
                }
                Ok(())
            }
        }
    };
}

tensor_common!(HermiteExpansion);
tensor_common!(TaylorExpansion);

pub(crate) fn scale_factor(sigma: f64) -> f64 {
    std::f64::consts::SQRT_2 * sigma
}

fn check_dim(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(invalid(format!(
            "{what} has dimension {got}, expected {want}"
        )));
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

/// Per-dimension scratch: `d` rows of `len` values.
struct Rows {
    data: Vec<f64>,
    len: usize,
}

impl Rows {
    fn new(d: usize, len: usize) -> Self {
        Self {
            data: vec![0.0; d * len],
            len,
        }
    }

    fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.len..(i + 1) * self.len]
    }

    fn views(&self, take: usize) -> Vec<&[f64]> {
        self.data.chunks_exact(self.len).map(|r| &r[..take]).collect()
    }
}

/// `row[k] = u^k / k!`, factorials formed on the fly.
#[inline]
fn scaled_powers(u: f64, row: &mut [f64]) {
    let mut pw = 1.0;
    for (k, r) in row.iter_mut().enumerate() {
        *r = pw;
        pw = pw * u / (k + 1) as f64;
    }
}

/// `row[k] = (-1)^k / k! * h_k(u)`, in place over Hermite values.
#[inline]
fn signed_inverse_factorials(row: &mut [f64]) {
    let mut f = 1.0;
    for (k, r) in row.iter_mut().enumerate() {
        *r *= f;
        f = -f / (k + 1) as f64;
    }
}

pub(crate) fn hermite_coeffs_iter<'a>(
    sources: impl Iterator<Item = &'a GaussianSource>,
    center: &[f64],
    p: usize,
    sigma: f64,
) -> Result<HermiteExpansion> {
    check_sigma(sigma)?;
    let mut h = HermiteExpansion::zero(center.to_vec(), p)?;
    let c = scale_factor(sigma);
    let d = center.len();
    let mut rows = Rows::new(d, p);
    let mut scratch = Vec::new();
    for s in sources {
        check_dim("source", s.dim(), d)?;
        for i in 0..d {
            scaled_powers((s.position[i] - center[i]) / c, rows.row_mut(i));
        }
        add_outer(&mut h.coeffs, &rows.views(p), s.weight, &mut scratch);
    }
    Ok(h)
}

/// `A_alpha = 1/alpha! sum_j q_j ((x_j - center) / c)^alpha`.
pub fn hermite_coeffs(
    sources: &[GaussianSource],
    center: &[f64],
    p: usize,
    sigma: f64,
) -> Result<HermiteExpansion> {
    hermite_coeffs_iter(sources.iter(), center, p, sigma)
}

pub(crate) fn taylor_coeffs_iter<'a>(
    sources: impl Iterator<Item = &'a GaussianSource>,
    center: &[f64],
    p: usize,
    sigma: f64,
    backend: HermiteBackend,
) -> Result<TaylorExpansion> {
    check_sigma(sigma)?;
    let mut t = TaylorExpansion::zero(center.to_vec(), p)?;
    let c = scale_factor(sigma);
    let d = center.len();
    let mut rows = Rows::new(d, p);
    let mut scratch = Vec::new();
    for s in sources {
        check_dim("source", s.dim(), d)?;
        for i in 0..d {
            let row = rows.row_mut(i);
            fill((center[i] - s.position[i]) / c, backend, row);
            signed_inverse_factorials(row);
        }
        add_outer(&mut t.coeffs, &rows.views(p), s.weight, &mut scratch);
    }
    Ok(t)
}

/// `B_beta = (-1)^|beta| / beta! sum_j q_j h_beta((center - x_j) / c)`,
/// the Taylor coefficients of the sources' field about `center`.
pub fn taylor_coeffs(
    sources: &[GaussianSource],
    center: &[f64],
    p: usize,
    sigma: f64,
    backend: HermiteBackend,
) -> Result<TaylorExpansion> {
    taylor_coeffs_iter(sources.iter(), center, p, sigma, backend)
}

/// Re-expands a Hermite series about `target_center`:
/// `C_beta = (-1)^|beta| / beta! sum_alpha A_alpha h_{alpha+beta}((target_center - center) / c)`.
///
/// Hermite orders reach `2(p - 1)` per dimension.
pub fn h2t_translate(
    h: &HermiteExpansion,
    target_center: &[f64],
    sigma: f64,
    backend: HermiteBackend,
) -> Result<TaylorExpansion> {
    check_sigma(sigma)?;
    check_dim("target center", target_center.len(), h.dim())?;
    let p = h.p;
    let c = scale_factor(sigma);
    let mut values = vec![0.0; 2 * p - 1];
    let mats: Vec<Vec<f64>> = (0..h.dim())
        .map(|i| {
            fill((target_center[i] - h.center[i]) / c, backend, &mut values);
            let mut m = vec![0.0; p * p];
            let mut f = 1.0;
            for b in 0..p {
                for a in 0..p {
                    m[b * p + a] = f * values[a + b];
                }
                f = -f / (b + 1) as f64;
            }
            m
        })
        .collect();
    Ok(TaylorExpansion {
        center: target_center.to_vec(),
        p,
        coeffs: apply_per_mode(&h.coeffs, &mats, p),
    })
}

/// Evaluates a Hermite series at `y`.
pub fn hermite_eval(h: &HermiteExpansion, y: &[f64], sigma: f64, backend: HermiteBackend) -> Result<f64> {
    check_sigma(sigma)?;
    check_dim("target", y.len(), h.dim())?;
    let mut rows = Rows::new(h.dim(), h.p);
    Ok(hermite_eval_with(h, y, scale_factor(sigma), backend, &mut rows.data, &mut Vec::new()))
}

/// Hot-path form of [`hermite_eval`] with caller-owned scratch (`d * p` values).
pub(crate) fn hermite_eval_with(
    h: &HermiteExpansion,
    y: &[f64],
    c: f64,
    backend: HermiteBackend,
    rows: &mut [f64],
    scratch: &mut Vec<f64>,
) -> f64 {
    let p = h.p;
    for (i, row) in rows.chunks_exact_mut(p).enumerate() {
        fill((y[i] - h.center[i]) / c, backend, row);
    }
    let views: Vec<&[f64]> = rows.chunks_exact(p).collect();
    contract(&h.coeffs, &views, scratch)
}

/// Evaluates a Taylor series at `y`.
pub fn taylor_eval(t: &TaylorExpansion, y: &[f64], sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    check_dim("target", y.len(), t.dim())?;
    let mut rows = vec![0.0; t.dim() * t.p];
    Ok(taylor_eval_with(t, y, scale_factor(sigma), &mut rows, &mut Vec::new()))
}

pub(crate) fn taylor_eval_with(
    t: &TaylorExpansion,
    y: &[f64],
    c: f64,
    rows: &mut [f64],
    scratch: &mut Vec<f64>,
) -> f64 {
    let p = t.p;
    for (i, row) in rows.chunks_exact_mut(p).enumerate() {
        let u = (y[i] - t.center[i]) / c;
        let mut pw = 1.0;
        for r in row.iter_mut() {
            *r = pw;
            pw *= u;
        }
    }
    let views: Vec<&[f64]> = rows.chunks_exact(p).collect();
    contract(&t.coeffs, &views, scratch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgt::direct_gauss;

    const R: HermiteBackend = HermiteBackend::Recurrence;

    fn src(x: &[f64], q: f64) -> GaussianSource {
        GaussianSource::new(x.to_vec(), q)
    }

    #[test]
    fn hermite_coefficient_examples() {
        let h = hermite_coeffs(&[src(&[0.2, 0.3], 1.5)], &[0.2, 0.3], 4, 0.1).unwrap();
        assert_eq!(h.coeffs[0], 1.5);
        assert!(h.coeffs[1..].iter().all(|&a| a == 0.0));

        let sigma = 0.3;
        let h = hermite_coeffs(&[src(&[1.0 + scale_factor(sigma)], 1.0)], &[1.0], 4, sigma).unwrap();
        for (k, want) in [1.0, 1.0, 0.5, 1.0 / 6.0].iter().enumerate() {
            assert!((h.coeffs[k] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn taylor_coefficient_examples() {
        let t = taylor_coeffs(&[src(&[0.4], 1.0)], &[0.4], 3, 0.2, R).unwrap();
        assert_eq!(t.coeffs[0], 1.0);
        assert_eq!(t.coeffs[1], 0.0);
        let empty = taylor_coeffs(&[], &[0.0, 0.0], 3, 0.2, R).unwrap();
        assert!(empty.coeffs.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn evaluation_examples() {
        let sigma = 0.25;
        let mut h = HermiteExpansion::zero(vec![0.1], 5).unwrap();
        h.coeffs[0] = 1.0;
        let y = [0.47];
        let want = direct_gauss(&[src(&[0.1], 1.0)], &[y.to_vec()], sigma).unwrap()[0];
        assert!((hermite_eval(&h, &y, sigma, R).unwrap() - want).abs() < 1e-16);

        let mut t = TaylorExpansion::zero(vec![0.0], 3).unwrap();
        t.coeffs[0] = 2.5;
        assert_eq!(taylor_eval(&t, &[0.0], sigma).unwrap(), 2.5);
        t.coeffs = vec![0.0, 1.0, 0.0];
        assert!((taylor_eval(&t, &[scale_factor(sigma)], sigma).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn h2t_at_coincident_centers() {
        let mut h = HermiteExpansion::zero(vec![0.0, 0.0], 4).unwrap();
        h.coeffs[0] = 1.0;
        let t = h2t_translate(&h, &[0.0, 0.0], 1.0, R).unwrap();
        for b0 in 0..4 {
            for b1 in 0..4 {
                let v = t.coeffs[b0 * 4 + b1];
                if b0 % 2 == 1 || b1 % 2 == 1 {
                    assert_eq!(v, 0.0);
                }
            }
        }
        let zero = HermiteExpansion::zero(vec![0.0], 4).unwrap();
        let tz = h2t_translate(&zero, &[3.0], 1.0, R).unwrap();
        assert!(tz.coeffs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn series_match_direct_sum() {
        let sigma = 0.2;
        let sources: Vec<_> = (0..16)
            .map(|i| {
                let a = i as f64 * 0.618;
                src(&[0.5 + 0.05 * a.sin(), 0.5 + 0.05 * a.cos()], 1.0 + 0.1 * i as f64)
            })
            .collect();
        let total: f64 = sources.iter().map(|s| s.weight).sum();
        let sc = [0.5, 0.5];
        let tc = [0.5 + 3.0 * sigma, 0.5 - 1.0 * sigma];
        let targets: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![tc[0] + 0.01 * i as f64, tc[1] - 0.005 * i as f64])
            .collect();
        let exact = direct_gauss(&sources, &targets, sigma).unwrap();
        let h = hermite_coeffs(&sources, &sc, 12, sigma).unwrap();
        let t = taylor_coeffs(&sources, &tc, 12, sigma, R).unwrap();
        let ht = h2t_translate(&h, &tc, sigma, R).unwrap();
        for (y, g) in targets.iter().zip(&exact) {
            assert!((hermite_eval(&h, y, sigma, R).unwrap() - g).abs() < 1e-9 * total);
            assert!((taylor_eval(&t, y, sigma).unwrap() - g).abs() < 1e-9 * total);
            assert!((taylor_eval(&ht, y, sigma).unwrap() - g).abs() < 1e-9 * total);
        }
    }

    #[test]
    fn dimension_mismatch() {
        assert!(hermite_coeffs(&[src(&[0.0], 1.0)], &[0.0, 0.0], 3, 1.0).is_err());
        let h = HermiteExpansion::zero(vec![0.0, 0.0], 3).unwrap();
        assert!(hermite_eval(&h, &[0.0], 1.0, R).is_err());
        assert!(hermite_coeffs(&[], &[0.0], 3, 0.0).is_err());
    }
}
