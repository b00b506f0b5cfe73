//! Multi-index algebra for tensor-product series.
//!
//! Every series in the library is truncated per dimension: an index set
//! of order `p` in `d` dimensions holds all `α` with `0 <= α_i < p`, so
//! `p^d` coefficients in total. Coefficient tensors are stored flat in
//! lexicographic order with the last dimension varying fastest, which is
//! exactly the order produced by [`enumerate_multi_indices`].

use std::fmt;

use crate::combinatorics::factorial;
use crate::error::{invalid, Error, Result};

/// Largest component accepted by [`multi_index_factorial`].
pub const FACTORIAL_GUARD: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("multi-index must have at least one component"));
        }
        Ok(Self(components))
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// `|α| = α_1 + ... + α_d`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Component-wise sum `α + β`.
    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.dim() != other.dim() {
            return Err(invalid("multi-index dimensions differ"));
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// Concatenation `α ⊕ β` (dimension `d_α + d_β`).
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut c = self.0.clone();
        c.extend_from_slice(&other.0);
        Self(c)
    }

    /// Position of this index in the flat tensor of order `p`.
    pub fn flat_index(&self, p: usize) -> usize {
        self.0.iter().fold(0, |acc, &a| acc * p + a as usize)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices with components in `[0, p)`, last dimension fastest.
pub fn enumerate_multi_indices(p: usize, d: usize) -> Result<Vec<MultiIndex>> {
    if p == 0 || d == 0 {
        return Err(invalid(format!("p and d must be positive (p={p}, d={d})")));
    }
    let total = tensor_len(p, d)?;
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0u32; d];
    for _ in 0..total {
        out.push(MultiIndex(cur.clone()));
        // odometer increment, last component first
        for slot in cur.iter_mut().rev() {
            *slot += 1;
            if (*slot as usize) < p {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}

/// `p^d`, the number of coefficients in a tensor of order `p`.
pub fn tensor_len(p: usize, d: usize) -> Result<usize> {
    u32::try_from(d)
        .ok()
        .and_then(|d| p.checked_pow(d))
        .ok_or_else(|| Error::Range(format!("p^d overflows for p={p}, d={d}")))
}

/// `α! = α_1! ... α_d!`.
pub fn multi_index_factorial(alpha: &MultiIndex) -> Result<u128> {
    alpha.0.iter().try_fold(1u128, |acc, &a| {
        if a > FACTORIAL_GUARD {
            return Err(Error::Range(format!(
                "component {a} exceeds the factorial guard {FACTORIAL_GUARD}"
            )));
        }
        acc.checked_mul(factorial(a) as u128)
            .ok_or_else(|| Error::Range(format!("{alpha}! overflows u128")))
    })
}

pub fn multi_index_degree(alpha: &MultiIndex) -> u32 {
    alpha.degree()
}

/// `t^α = t_1^α_1 ... t_d^α_d`, with `0^0 = 1`.
pub fn multi_index_power(t: &[f64], alpha: &MultiIndex) -> Result<f64> {
    if t.len() != alpha.dim() {
        return Err(invalid(format!(
            "point has {} coordinates but the multi-index has {}",
            t.len(),
            alpha.dim()
        )));
    }
    // powi(0) is exactly 1 for every input, including 0
    Ok(t.iter()
        .zip(&alpha.0)
        .map(|(&x, &a)| x.powi(a as i32))
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(c: &[u32]) -> MultiIndex {
        MultiIndex::new(c.to_vec()).unwrap()
    }

    #[test]
    fn enumerates_in_lexicographic_order() {
        let got = enumerate_multi_indices(2, 2).unwrap();
        assert_eq!(got, vec![mi(&[0, 0]), mi(&[0, 1]), mi(&[1, 0]), mi(&[1, 1])]);
        assert_eq!(enumerate_multi_indices(3, 2).unwrap().len(), 9);
        assert_eq!(enumerate_multi_indices(1, 3).unwrap(), vec![mi(&[0, 0, 0])]);
    }

    #[test]
    fn rejects_zero_order_or_dimension() {
        assert!(matches!(
            enumerate_multi_indices(0, 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            enumerate_multi_indices(3, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn enumeration_is_sorted_unique_and_complete() {
        for p in 1..=6 {
            for d in 1..=3 {
                let all = enumerate_multi_indices(p, d).unwrap();
                assert_eq!(all.len(), p.pow(d as u32));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                for (i, a) in all.iter().enumerate() {
                    assert_eq!(a.flat_index(p), i);
                }
            }
        }
    }

    #[test]
    fn factorial_degree_power() {
        assert_eq!(multi_index_factorial(&mi(&[0, 0])).unwrap(), 1);
        assert_eq!(multi_index_factorial(&mi(&[3, 2])).unwrap(), 12);
        assert_eq!(multi_index_factorial(&mi(&[5])).unwrap(), 120);
        assert_eq!(multi_index_degree(&mi(&[0, 0])), 0);
        assert_eq!(multi_index_degree(&mi(&[3, 2])), 5);
        assert_eq!(multi_index_degree(&mi(&[1, 1, 1])), 3);
        assert_eq!(multi_index_power(&[2.0, 3.0], &mi(&[1, 2])).unwrap(), 18.0);
        assert_eq!(multi_index_power(&[0.0, 5.0], &mi(&[0, 1])).unwrap(), 5.0);
        assert_eq!(multi_index_power(&[-7.25], &mi(&[0])).unwrap(), 1.0);
    }

    #[test]
    fn factorial_guards() {
        assert!(matches!(
            multi_index_factorial(&mi(&[21])),
            Err(Error::Range(_))
        ));
        assert!(multi_index_factorial(&mi(&[20, 20])).is_ok());
        assert!(matches!(
            multi_index_factorial(&mi(&[20, 20, 20])),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn power_length_mismatch() {
        assert!(matches!(
            multi_index_power(&[1.0], &mi(&[1, 1])),
            Err(Error::InvalidArgument(_))
        ));
    }

    proptest::proptest! {
        #[test]
        fn factorial_of_concatenation_is_product(
            a in proptest::collection::vec(0u32..=10, 1..3),
            b in proptest::collection::vec(0u32..=10, 1..3),
        ) {
            let (a, b) = (mi(&a), mi(&b));
            let lhs = multi_index_factorial(&a.concat(&b)).unwrap();
            let rhs = multi_index_factorial(&a).unwrap() * multi_index_factorial(&b).unwrap();
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}
