//! Fast Gauss transform `G(y) = sum_i q_i exp(-|y - x_i|^2 / (2 sigma^2))`.
//!
//! Sources and targets share a uniform grid of boxes with side
//! `r sqrt(2) sigma`. Box pairs beyond the neighbor cutoff are skipped; every
//! other pair is handled directly, through the source box's Hermite series,
//! through a Taylor series about the target box, or through a Hermite series
//! translated into that Taylor series. Coefficient tensors are dense over
//! `p^d` multi-indices.

mod cost;
mod direct;
mod evaluate;
mod expansion;
mod grid;
mod hermite;
mod tensor;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use cost::{select_strategy, select_strategy_with_fan, strategy_costs, StrategyCosts, EXP_COST};
pub use direct::direct_gauss;
pub use evaluate::{evaluate_pair, fgt_evaluate, FgtOutput};
pub use expansion::{
    h2t_translate, hermite_coeffs, hermite_eval, taylor_coeffs, taylor_eval, HermiteExpansion,
    TaylorExpansion,
};
pub use grid::{build_fgt_grid, neighbor_cutoff, FgtGrid, MAX_BOXES};
pub use hermite::{
    hermite_function, hermite_functions, hermite_polynomial_coeffs, HermiteBackend, HERMITE_GUARD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Direct,
    Hermite,
    Taylor,
    HermiteToTaylor,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Direct,
        Strategy::Hermite,
        Strategy::Taylor,
        Strategy::HermiteToTaylor,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Direct => "direct",
            Strategy::Hermite => "hermite",
            Strategy::Taylor => "taylor",
            Strategy::HermiteToTaylor => "hermite_to_taylor",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FgtConfig {
    pub sigma: f64,
    /// Terms per dimension.
    pub p: usize,
    pub dimension: usize,
    /// Box side in units of `sqrt(2) sigma`.
    pub r: f64,
    /// Kernel values below this are neglected.
    pub eps_cut: f64,
    pub hermite_backend: HermiteBackend,
}

impl FgtConfig {
    /// `r = 0.5`, `eps_cut = 1e-12`, recurrence backend.
    pub fn new(sigma: f64, p: usize, dimension: usize) -> Self {
        Self {
            sigma,
            p,
            dimension,
            r: 0.5,
            eps_cut: 1e-12,
            hermite_backend: HermiteBackend::Recurrence,
        }
    }

    pub fn box_side(&self) -> f64 {
        self.r * std::f64::consts::SQRT_2 * self.sigma
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(invalid(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.p == 0 || 2 * self.p - 1 > HERMITE_GUARD {
            return Err(invalid(format!(
                "p must be between 1 and {}, got {}",
                HERMITE_GUARD.div_ceil(2),
                self.p
            )));
        }
        if !(1..=3).contains(&self.dimension) {
            return Err(invalid(format!(
                "dimension must be 1, 2 or 3, got {}",
                self.dimension
            )));
        }
        if !(self.r > 0.0 && self.r <= 1.0) {
            return Err(invalid(format!("r must lie in (0, 1], got {}", self.r)));
        }
        if !(self.eps_cut > 0.0 && self.eps_cut < 1.0) {
            return Err(invalid(format!(
                "eps_cut must lie in (0, 1), got {}",
                self.eps_cut
            )));
        }
        Ok(())
    }
}
