//! Horner evaluation of dense polynomials.
//!
//! Coefficients are stored highest degree first: `[c0, c1, ..., c_{m-1}]`
//! is `c0 x^{m-1} + ... + c_{m-1}`. The accumulator is seeded with the
//! leading coefficient and each step is the fused `y = c + x * y`.

use num_traits::Float;

use crate::error::{invalid, Result};

/// Non-empty coefficient list, highest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoeffs(Vec<f64>);

impl PolynomialCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("polynomial needs at least one coefficient"));
        }
        Ok(Self(coeffs))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.0, x)
    }
}

pub fn horner_eval(poly: &[f64], x: f64) -> Result<f64> {
    if poly.is_empty() {
        return Err(invalid("polynomial needs at least one coefficient"));
    }
    Ok(horner(poly, x))
}

/// Unchecked loop form; an empty slice evaluates to zero.
#[inline]
pub fn horner<T: Float>(coeffs: &[T], x: T) -> T {
    let Some((&first, rest)) = coeffs.split_first() else {
        return T::zero();
    };
    rest.iter().fold(first, |y, &c| c + x * y)
}

/// Fixed-length form; the trip count is a compile-time constant so the
/// loop is fully unrolled.
#[inline(always)]
pub fn horner_unrolled<const N: usize>(coeffs: &[f64; N], x: f64) -> f64 {
    if N == 0 {
        return 0.0;
    }
    let mut y = coeffs[0];
    let mut i = 1;
    while i < N {
        y = coeffs[i] + x * y;
        i += 1;
    }
    y
}

/// Compensated Horner: the rounding error of every step is captured
/// exactly (two-product via FMA, two-sum) and run through a second Horner
/// pass. The result is as accurate as plain Horner in twice the working
/// precision, which matters near roots where the terms cancel.
pub fn horner_compensated(coeffs: &[f64], x: f64) -> f64 {
    let Some((&first, rest)) = coeffs.split_first() else {
        return 0.0;
    };
    let mut y = first;
    let mut err = 0.0;
    for &c in rest {
        let prod = x * y;
        let prod_err = x.mul_add(y, -prod);
        let sum = prod + c;
        let b = sum - prod;
        let sum_err = (prod - (sum - b)) + (c - b);
        y = sum;
        err = x.mul_add(err, prod_err + sum_err);
    }
    y + err
}
