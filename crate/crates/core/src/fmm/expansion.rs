//! Series representations for the Cauchy kernel `K(y, x) = 1 / (y - x)`.
//!
//! A cluster of sources about `c` is represented by the Laurent series
//! `sum_k m_k (z - c)^{-k-1}`, a far field about `c` by the Taylor series
//! `sum_n l_n (z - c)^n`.

use num_traits::Zero;

use crate::dataset::Particle;
use crate::error::{invalid, Result};
use crate::real::{Complex, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct MultipoleExpansion<T = f64> {
    pub center: Complex<T>,
    pub coeffs: Vec<Complex<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalExpansion<T = f64> {
    pub center: Complex<T>,
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> MultipoleExpansion<T> {
    pub fn zero(center: Complex<T>, p: usize) -> Self {
        Self {
            center,
            coeffs: vec![Complex::zero(); p],
        }
    }

    pub fn new(center: Complex<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("expansion needs at least one coefficient"));
        }
        Ok(Self { center, coeffs })
    }

    pub fn p(&self) -> usize {
        self.coeffs.len()
    }

    /// Evaluates the truncated Laurent series at `z`.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let w = (z - self.center).inv();
        // sum_k m_k w^{k+1} = w * (m_0 + w (m_1 + ...))
        let mut y = Complex::zero();
        for m in self.coeffs.iter().rev() {
            y = *m + w * y;
        }
        w * y
    }
}

impl<T: Real> LocalExpansion<T> {
    pub fn zero(center: Complex<T>, p: usize) -> Self {
        Self {
            center,
            coeffs: vec![Complex::zero(); p],
        }
    }

    pub fn new(center: Complex<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("expansion needs at least one coefficient"));
        }
        Ok(Self { center, coeffs })
    }

    pub fn p(&self) -> usize {
        self.coeffs.len()
    }
}

/// Forms `m_k = sum_i q_i (z_i - center)^k` for `k < p`.
pub fn p2m<T: Real>(sources: &[Particle<T>], center: Complex<T>, p: usize) -> MultipoleExpansion<T> {
    let mut me = MultipoleExpansion::zero(center, p);
    for s in sources {
        let d = s.position - center;
        let mut pw = Complex::new(s.weight, T::zero());
        for m in me.coeffs.iter_mut() {
            *m += pw;
            pw *= d;
        }
    }
    me
}

/// Same as [`p2m`] for a subset of `particles` given by index.
pub fn p2m_indexed<T: Real>(
    particles: &[Particle<T>],
    members: &[usize],
    center: Complex<T>,
    p: usize,
) -> MultipoleExpansion<T> {
    let mut me = MultipoleExpansion::zero(center, p);
    for &i in members {
        let s = &particles[i];
        let d = s.position - center;
        let mut pw = Complex::new(s.weight, T::zero());
        for m in me.coeffs.iter_mut() {
            *m += pw;
            pw *= d;
        }
    }
    me
}

/// `sum_n l_n (z - center)^n` by complex Horner.
pub fn l2p<T: Real>(le: &LocalExpansion<T>, z: Complex<T>) -> Complex<T> {
    let d = z - le.center;
    le.coeffs
        .iter()
        .rev()
        .fold(Complex::zero(), |y, &l| l + d * y)
}

/// Direct sum `f(y) = sum_i q_i / (y - z_i)`, skipping exact coincidences.
pub fn p2p<T: Real>(sources: &[Particle<T>], targets: &[Complex<T>]) -> Vec<Complex<T>> {
    targets.iter().map(|&y| p2p_at(sources.iter(), y)).collect()
}

#[inline]
pub(crate) fn p2p_at<'a, T: Real>(
    sources: impl Iterator<Item = &'a Particle<T>>,
    y: Complex<T>,
) -> Complex<T> {
    let mut acc = Complex::zero();
    for s in sources {
        let d = y - s.position;
        if d.re == T::zero() && d.im == T::zero() {
            continue;
        }
        acc += d.inv() * s.weight;
    }
    acc
}
