use crate::error::{invalid, Error, Result};

/// Largest `n` accepted by [`binomial`]; covers `n + k` for `p <= 16` with room to spare.
pub const BINOMIAL_GUARD: u64 = 62;

/// `n!` for `n <= 20` (the largest factorial that fits in `u64`).
///
/// Computed by the running product rather than a lookup table.
pub fn factorial(n: u32) -> u64 {
    debug_assert!(n <= 20, "factorial({n}) overflows u64");
    (2..=n as u64).product()
}

/// Exact `n` choose `k`.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Err(invalid(format!("binomial({n}, {k}) requires k <= n")));
    }
    if n > BINOMIAL_GUARD {
        return Err(Error::Range(format!(
            "binomial argument {n} exceeds the guard {BINOMIAL_GUARD}"
        )));
    }
    let k = k.min(n - k);
    // each partial product r * (n - i) / (i + 1) is itself a binomial, so
    // the division is exact; u128 keeps the intermediate product in range
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    Ok(r as u64)
}
