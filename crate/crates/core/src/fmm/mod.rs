//! Single-level 2D fast multipole method for the Cauchy kernel `1 / (y - x)`.
//!
//! Particles are binned into a uniform `2^l x 2^l` grid. Each box forms a
//! multipole expansion about its center; every box receives the translated
//! expansions of all non-adjacent boxes, reduced into one local expansion,
//! and adds direct interactions with its 3x3 neighborhood.

mod evaluate;
mod expansion;
mod grid;
mod m2l;
pub mod ops;
mod plan;
mod workload;

use serde::{Deserialize, Serialize};

use crate::dataset::Particle;
use crate::error::{invalid, Result};
use crate::real::Real;

pub use evaluate::{direct_field, fmm_evaluate, max_relative_error, FmmOutput};
pub use expansion::{l2p, p2m, p2m_indexed, p2p, LocalExpansion, MultipoleExpansion};
pub use grid::{bin_particles, GridBox, GridDecomposition, Square};
pub use m2l::{m2l_batch, m2l_element, m2l_translate, translate_into, M2lBatch, Traversal};
pub use plan::{
    far_pairs_single_level, idealized_plan, interaction_list_at_level,
    interaction_list_hierarchical, level_for_translations, periodic_plan, InteractionList,
    TranslationPlan, FULL_INTERACTION_LIST,
};
pub use workload::synthetic_expansions;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FmmConfig {
    /// Expansion terms.
    pub p: usize,
    /// Grid depth; the grid has `4^level` boxes.
    pub level: u32,
    pub traversal: Traversal,
    #[serde(skip, default = "Square::unit")]
    pub domain: Square,
}

impl FmmConfig {
    /// Unit-square domain, row traversal.
    pub fn new(p: usize, level: u32) -> Self {
        Self {
            p,
            level,
            traversal: Traversal::default(),
            domain: Square::unit(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(invalid("p must be at least 1"));
        }
        if self.level < 2 {
            return Err(invalid(format!(
                "level must be at least 2, got {}",
                self.level
            )));
        }
        self.domain.validate()
    }
}

/// Bins `particles` into the grid described by `config`.
pub fn build_grid<T: Real>(particles: &[Particle<T>], config: &FmmConfig) -> Result<GridDecomposition> {
    config.validate()?;
    bin_particles(particles, config.level, &config.domain)
}
