//! Work estimates for one (source box, target box) interaction.
//!
//! Costs count real operations for `n` sources, `m` targets, `p` terms per
//! dimension, `d` dimensions and `P = p^d` coefficients. One exponential
//! counts as `EXP_COST` operations.
//!
//! * direct: `n m (3d + 3 + EXP_COST)`
//! * hermite: form `n (2dp + 2P)`, shared by the `fan_src` target boxes the
//!   source box reaches; evaluate `m (d (EXP_COST + 4p) + 2P)`
//! * taylor: form `n (d (EXP_COST + 6p) + 2P)`; evaluate `m (2dp + 2P)`,
//!   shared by the `fan_tgt` source boxes feeding the target box
//! * hermite_to_taylor: shared Hermite formation, translation
//!   `d (EXP_COST + 8p) + 2dp^{d+1}`, shared Taylor evaluation
//!
//! Ties go to the first strategy in the order direct, hermite, taylor,
//! hermite_to_taylor.

use super::grid::default_fan;
use super::Strategy;

pub const EXP_COST: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyCosts {
    pub direct: f64,
    pub hermite: f64,
    pub taylor: f64,
    pub hermite_to_taylor: f64,
}

impl StrategyCosts {
    pub fn get(&self, s: Strategy) -> f64 {
        match s {
            Strategy::Direct => self.direct,
            Strategy::Hermite => self.hermite,
            Strategy::Taylor => self.taylor,
            Strategy::HermiteToTaylor => self.hermite_to_taylor,
        }
    }

    pub fn cheapest(&self) -> Strategy {
        Strategy::ALL
            .into_iter()
            .fold(Strategy::Direct, |best, s| if self.get(s) < self.get(best) { s } else { best })
    }
}

pub(crate) fn hermite_form_cost(n: f64, p: f64, d: f64) -> f64 {
    n * (2.0 * d * p + 2.0 * p.powf(d))
}

pub(crate) fn hermite_eval_cost(m: f64, p: f64, d: f64) -> f64 {
    m * (d * (EXP_COST + 4.0 * p) + 2.0 * p.powf(d))
}

pub(crate) fn taylor_form_cost(n: f64, p: f64, d: f64) -> f64 {
    n * (d * (EXP_COST + 6.0 * p) + 2.0 * p.powf(d))
}

pub(crate) fn taylor_eval_cost(m: f64, p: f64, d: f64) -> f64 {
    m * (2.0 * d * p + 2.0 * p.powf(d))
}

pub(crate) fn translate_cost(p: f64, d: f64) -> f64 {
    d * (EXP_COST + 8.0 * p) + 2.0 * d * p.powf(d + 1.0)
}

pub(crate) fn direct_cost(n: f64, m: f64, d: f64) -> f64 {
    n * m * (3.0 * d + 3.0 + EXP_COST)
}

/// Costs with explicit fan-outs (both at least 1).
pub fn strategy_costs(n_src: usize, n_tgt: usize, p: usize, d: usize, fan_src: f64, fan_tgt: f64) -> StrategyCosts {
    let (n, m, p, d) = (n_src as f64, n_tgt as f64, p as f64, d as f64);
    let fan_src = fan_src.max(1.0);
    let fan_tgt = fan_tgt.max(1.0);
    StrategyCosts {
        direct: direct_cost(n, m, d),
        hermite: hermite_form_cost(n, p, d) / fan_src + hermite_eval_cost(m, p, d),
        taylor: taylor_form_cost(n, p, d) + taylor_eval_cost(m, p, d) / fan_tgt,
        hermite_to_taylor: hermite_form_cost(n, p, d) / fan_src
            + translate_cost(p, d)
            + taylor_eval_cost(m, p, d) / fan_tgt,
    }
}

/// Cheapest strategy assuming every box interacts with a full neighborhood
/// under the default cutoff.
pub fn select_strategy(n_src: usize, n_tgt: usize, p: usize, d: usize) -> Strategy {
    let fan = default_fan(d);
    select_strategy_with_fan(n_src, n_tgt, p, d, fan, fan)
}

pub fn select_strategy_with_fan(n_src: usize, n_tgt: usize, p: usize, d: usize, fan_src: f64, fan_tgt: f64) -> Strategy {
    strategy_costs(n_src, n_tgt, p, d, fan_src, fan_tgt).cheapest()
}
