//! Hermite functions `h_n(t) = e^{-t^2} H_n(t)`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::horner::horner_compensated;

/// Orders `n < HERMITE_GUARD` are supported.
pub const HERMITE_GUARD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HermiteBackend {
    /// Three-term recurrence on the functions themselves.
    #[default]
    Recurrence,
    /// Compensated Horner evaluation of tabulated polynomial coefficients,
    /// times `e^{-t^2}`. Plain Horner on these coefficients loses up to
    /// eight digits near the roots of high-order polynomials.
    HornerTable,
}

impl HermiteBackend {
    pub fn as_str(self) -> &'static str {
        match self {
            HermiteBackend::Recurrence => "recurrence",
            HermiteBackend::HornerTable => "horner_table",
        }
    }
}

fn table() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // lowest degree first while building: H_{n+1} = 2t H_n - 2n H_{n-1}
        let mut low: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 2.0]];
        for n in 1..HERMITE_GUARD - 1 {
            let mut next = vec![0.0; n + 2];
            for (i, c) in low[n].iter().enumerate() {
                next[i + 1] += 2.0 * c;
            }
            for (i, c) in low[n - 1].iter().enumerate() {
                next[i] -= 2.0 * n as f64 * c;
            }
            low.push(next);
        }
        low.into_iter()
            .map(|mut c| {
                c.reverse();
                c
            })
            .collect()
    })
}

/// Coefficients of the physicists' Hermite polynomial `H_n`, highest degree first.
pub fn hermite_polynomial_coeffs(n: usize) -> Result<&'static [f64]> {
    check(n)?;
    Ok(&table()[n])
}

fn check(n: usize) -> Result<()> {
    if n >= HERMITE_GUARD {
        return Err(Error::Range(format!(
            "Hermite order {n} exceeds the supported maximum {}",
            HERMITE_GUARD - 1
        )));
    }
    Ok(())
}

/// `h_n(t)` with the chosen backend.
pub fn hermite_function(n: usize, t: f64, backend: HermiteBackend) -> Result<f64> {
    check(n)?;
    let mut out = vec![0.0; n + 1];
    fill(t, backend, &mut out);
    Ok(out[n])
}

/// Writes `h_0(t), ..., h_{len-1}(t)` into `out`; `out.len()` must not exceed the guard.
pub fn hermite_functions(t: f64, backend: HermiteBackend, out: &mut [f64]) -> Result<()> {
    if let Some(n) = out.len().checked_sub(1) {
        check(n)?;
    }
    fill(t, backend, out);
    Ok(())
}

#[inline]
pub(crate) fn fill(t: f64, backend: HermiteBackend, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let g = (-t * t).exp();
    match backend {
        HermiteBackend::Recurrence => {
            out[0] = g;
            if out.len() > 1 {
                out[1] = 2.0 * t * g;
            }
            for n in 1..out.len().saturating_sub(1) {
                out[n + 1] = 2.0 * t * out[n] - 2.0 * n as f64 * out[n - 1];
            }
        }
        HermiteBackend::HornerTable => {
            let table = table();
            for (n, o) in out.iter_mut().enumerate() {
                *o = horner_compensated(&table[n], t) * g;
            }
        }
    }
}
