//! Interaction planning: which multipole expansions each box translates.

use crate::error::{invalid, Result};
use crate::real::Complex64;

use super::grid::{box_center, GridDecomposition, Square};

/// Size of a full 2D interaction list: 6x6 children of the parent's
/// neighborhood minus the 3x3 near field.
pub const FULL_INTERACTION_LIST: usize = 27;

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionList {
    pub target: usize,
    /// Center of the target box, where its local expansion lives.
    pub center: Complex64,
    /// Source box ids, ascending.
    pub sources: Vec<usize>,
}

/// Translation work, grouped by target box (ascending target id).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TranslationPlan {
    lists: Vec<InteractionList>,
}

impl TranslationPlan {
    /// Builds a plan from lists; targets must be unique and each source list sorted.
    pub fn from_lists(mut lists: Vec<InteractionList>) -> Result<Self> {
        lists.retain(|l| !l.sources.is_empty());
        lists.sort_by_key(|l| l.target);
        if lists.windows(2).any(|w| w[0].target == w[1].target) {
            return Err(invalid("duplicate target in translation plan"));
        }
        if lists
            .iter()
            .any(|l| l.sources.windows(2).any(|w| w[0] > w[1]))
        {
            return Err(invalid("interaction lists must be sorted by source id"));
        }
        Ok(Self { lists })
    }

    pub fn lists(&self) -> &[InteractionList] {
        &self.lists
    }

    pub fn num_targets(&self) -> usize {
        self.lists.len()
    }

    /// Number of (source, target) translations.
    pub fn len(&self) -> usize {
        self.lists.iter().map(|l| l.sources.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// `(source, target)` pairs in target-major, source-ascending order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lists
            .iter()
            .flat_map(|l| l.sources.iter().map(move |&s| (s, l.target)))
    }

    pub fn max_source(&self) -> Option<usize> {
        self.lists.iter().filter_map(|l| l.sources.last().copied()).max()
    }
}

fn chebyshev(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

/// Interaction list of `box_id` at `level`: children of the parent's Moore
/// neighbors (parent included) that are not Moore-adjacent to the box.
///
/// With `periodic` the parent neighborhood wraps around the domain, so every
/// box gets exactly 27 entries. For `level < 3` the wrapped 6x6 window is
/// wider than the grid and some ids repeat; the list is then an idealized
/// workload rather than a set.
pub fn interaction_list_at_level(level: u32, box_id: usize, periodic: bool) -> Result<Vec<usize>> {
    if level == 0 || level > 15 {
        return Err(invalid(format!("level {level} has no interaction lists")));
    }
    let side = 1i64 << level;
    if box_id as i64 >= side * side {
        return Err(invalid(format!(
            "box {box_id} does not exist at level {level}"
        )));
    }
    let (ix, iy) = (box_id as i64 % side, box_id as i64 / side);
    let (px, py) = (ix.div_euclid(2), iy.div_euclid(2));
    let parent_side = side / 2;
    let mut out = Vec::with_capacity(FULL_INTERACTION_LIST);
    for qy in py - 1..=py + 1 {
        for qx in px - 1..=px + 1 {
            let inside = (0..parent_side).contains(&qx) && (0..parent_side).contains(&qy);
            if !periodic && !inside {
                continue;
            }
            for cy in 2 * qy..2 * qy + 2 {
                for cx in 2 * qx..2 * qx + 2 {
                    if chebyshev((cx, cy), (ix, iy)) <= 1 {
                        continue;
                    }
                    let (wx, wy) = (cx.rem_euclid(side), cy.rem_euclid(side));
                    out.push((wy * side + wx) as usize);
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn interaction_list_hierarchical(
    grid: &GridDecomposition,
    box_id: usize,
    periodic: bool,
) -> Result<Vec<usize>> {
    interaction_list_at_level(grid.level, box_id, periodic)
}

/// Single-level far field: every non-empty box that is not Moore-adjacent
/// to the (non-empty) target.
pub fn far_pairs_single_level(grid: &GridDecomposition) -> TranslationPlan {
    let occupied: Vec<usize> = (0..grid.num_boxes())
        .filter(|&b| !grid.boxes[b].members.is_empty())
        .collect();
    let lists = occupied
        .iter()
        .filter_map(|&target| {
            let (tx, ty) = grid.coords(target);
            let sources: Vec<usize> = occupied
                .iter()
                .copied()
                .filter(|&s| {
                    let (sx, sy) = grid.coords(s);
                    chebyshev((sx as i64, sy as i64), (tx as i64, ty as i64)) > 1
                })
                .collect();
            (!sources.is_empty()).then(|| InteractionList {
                target,
                center: grid.boxes[target].center,
                sources,
            })
        })
        .collect();
    TranslationPlan { lists }
}

/// Periodic interaction lists for every box of `level` in `domain`
/// (`4^level * 27` translations).
pub fn periodic_plan(level: u32, domain: &Square) -> Result<TranslationPlan> {
    idealized_plan(level, domain, (1usize << (2 * level)) * FULL_INTERACTION_LIST)
}

/// A workload of exactly `translations` pairs: consecutive targets at
/// `level`, each with its periodic 27-entry list, the last one truncated.
pub fn idealized_plan(level: u32, domain: &Square, translations: usize) -> Result<TranslationPlan> {
    let side = 1usize << level;
    let boxes = side * side;
    let targets = translations.div_ceil(FULL_INTERACTION_LIST);
    if targets > boxes {
        return Err(invalid(format!(
            "{translations} translations need {targets} targets but level {level} has {boxes} boxes"
        )));
    }
    let mut remaining = translations;
    let mut lists = Vec::with_capacity(targets);
    for target in 0..targets {
        let mut sources = interaction_list_at_level(level, target, true)?;
        sources.truncate(remaining);
        remaining -= sources.len();
        lists.push(InteractionList {
            target,
            center: box_center(domain, side, target % side, target / side),
            sources,
        });
    }
    TranslationPlan::from_lists(lists)
}

/// Smallest level (at least 3) whose box count covers `translations / 27` targets.
pub fn level_for_translations(translations: usize) -> u32 {
    let targets = translations.div_ceil(FULL_INTERACTION_LIST);
    let mut level = 3;
    while (1usize << (2 * level)) < targets {
        level += 1;
    }
    level
}
