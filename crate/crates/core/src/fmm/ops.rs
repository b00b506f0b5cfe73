//! Operation and byte-count model for the FMM kernels.
//!
//! Costs in real operations: complex multiply 6, complex add 2, real times
//! complex 2, reciprocal 6, real multiply-divide pair 2.

/// Per translation with the row traversal: `t` and `1/t` (8), then per row
/// the next power of `1/t` and the sign (8), then per matrix entry the
/// scaled power, the product with `m_k`, the accumulate, the next power and
/// the binomial update (18).
pub const fn m2l_ops_per_translation(p: usize) -> u64 {
    let p = p as u64;
    18 * p * p + 8 * p + 8
}

/// One multipole expansion read: `p` coefficients plus the center.
pub const fn m2l_bytes_read_per_translation(p: usize, real_bytes: usize) -> u64 {
    ((p + 1) * 2 * real_bytes) as u64
}

/// One local expansion written: `p` coefficients plus the center.
pub const fn m2l_bytes_written_per_target(p: usize, real_bytes: usize) -> u64 {
    ((p + 1) * 2 * real_bytes) as u64
}

/// Per particle: offset (2), then per term an accumulate and a multiply.
pub const fn p2m_ops_per_particle(p: usize) -> u64 {
    2 + 8 * p as u64
}

/// Per target: offset (2), then per term one complex multiply-add.
pub const fn l2p_ops_per_target(p: usize) -> u64 {
    2 + 8 * p as u64
}

/// Per source-target pair: difference, reciprocal, scale, accumulate.
pub const P2P_OPS_PER_PAIR: u64 = 12;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_cost_values() {
        assert_eq!(m2l_ops_per_translation(1), 34);
        assert_eq!(m2l_ops_per_translation(8), 1224);
        assert_eq!(m2l_bytes_read_per_translation(8, 4), 72);
    }
}
