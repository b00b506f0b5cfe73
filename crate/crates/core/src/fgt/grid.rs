use crate::dataset::GaussianSource;
use crate::error::{invalid, Error, Result};

use super::FgtConfig;

/// Upper bound on the number of boxes a grid may allocate.
pub const MAX_BOXES: usize = 1 << 24;

/// Uniform boxes tiling the bounding box of all sources and targets.
///
/// Box `(i_0, ..., i_{d-1})` has id `sum_k i_k * n_0 * ... * n_{k-1}`, so the
/// first axis varies fastest. Binning is half-open with the last box of each
/// axis closed, as in the FMM grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FgtGrid {
    pub side: f64,
    pub lo: Vec<f64>,
    /// Boxes per axis.
    pub counts: Vec<usize>,
    /// Source indices per box, ascending.
    pub sources: Vec<Vec<usize>>,
    /// Target indices per box, ascending.
    pub targets: Vec<Vec<usize>>,
}

impl FgtGrid {
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn num_boxes(&self) -> usize {
        self.sources.len()
    }

    pub fn coords(&self, mut id: usize) -> Vec<usize> {
        self.counts
            .iter()
            .map(|&n| {
                let c = id % n;
                id /= n;
                c
            })
            .collect()
    }

    pub fn id(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.counts)
            .rev()
            .fold(0, |acc, (&c, &n)| acc * n + c)
    }

    pub fn center(&self, id: usize) -> Vec<f64> {
        self.coords(id)
            .iter()
            .zip(&self.lo)
            .map(|(&c, &lo)| lo + (c as f64 + 0.5) * self.side)
            .collect()
    }

    /// Ids within Chebyshev index distance `radius` of `id`, ascending.
    pub fn window(&self, id: usize, radius: usize) -> Vec<usize> {
        let c = self.coords(id);
        let ranges: Vec<(usize, usize)> = c
            .iter()
            .zip(&self.counts)
            .map(|(&ci, &n)| (ci.saturating_sub(radius), (ci + radius).min(n - 1)))
            .collect();
        let mut out = Vec::new();
        let mut cur: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            out.push(self.id(&cur));
            for (k, r) in ranges.iter().enumerate() {
                if cur[k] < r.1 {
                    cur[k] += 1;
                    continue 'outer;
                }
                cur[k] = r.0;
            }
            break;
        }
        out
    }
}

fn bin(x: f64, lo: f64, side: f64, n: usize) -> usize {
    (((x - lo) / side).floor().max(0.0) as usize).min(n - 1)
}

/// Bins sources and targets into boxes of side `r * sqrt(2) * sigma`.
pub fn build_fgt_grid(
    sources: &[GaussianSource],
    targets: &[Vec<f64>],
    config: &FgtConfig,
) -> Result<FgtGrid> {
    config.validate()?;
    let d = config.dimension;
    let side = config.box_side();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    let points = sources
        .iter()
        .map(|s| s.position.as_slice())
        .chain(targets.iter().map(|t| t.as_slice()));
    for (index, x) in points.enumerate() {
        if x.len() != d {
            return Err(invalid(format!(
                "point {index} has dimension {}, expected {d}",
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::OutOfDomain { index });
        }
        for k in 0..d {
            lo[k] = lo[k].min(x[k]);
            hi[k] = hi[k].max(x[k]);
        }
    }
    if lo[0] > hi[0] {
        lo = vec![0.0; d];
        hi = vec![0.0; d];
    }
    let counts: Vec<usize> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| (((h - l) / side).ceil() as usize).max(1))
        .collect();
    let total = counts
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .filter(|&n| n <= MAX_BOXES)
        .ok_or_else(|| Error::Range(format!("grid of {counts:?} boxes is too large")))?;
    let mut grid = FgtGrid {
        side,
        lo,
        counts,
        sources: vec![Vec::new(); total],
        targets: vec![Vec::new(); total],
    };
    let locate = |grid: &FgtGrid, x: &[f64]| {
        let c: Vec<usize> = (0..d)
            .map(|k| bin(x[k], grid.lo[k], side, grid.counts[k]))
            .collect();
        grid.id(&c)
    };
    for (i, s) in sources.iter().enumerate() {
        let b = locate(&grid, &s.position);
        grid.sources[b].push(i);
    }
    for (i, t) in targets.iter().enumerate() {
        let b = locate(&grid, t);
        grid.targets[b].push(i);
    }
    Ok(grid)
}

/// Smallest `n` with `exp(-(n * side)^2 / (2 sigma^2)) <= eps_cut`.
///
/// Box pairs further apart than `n` boxes (Chebyshev index distance) are
/// skipped; every neglected kernel value is then at most `eps_cut`. The
/// comparison is made in log space with a relative slack of `1e-12` so that
/// exact boundary cases are not lost to rounding.
pub fn neighbor_cutoff(config: &FgtConfig) -> usize {
    // (n side)^2 / (2 sigma^2) = (n r)^2
    let need = -config.eps_cut.ln();
    let r = config.r;
    let mut n = (need.sqrt() / r).floor().max(0.0) as usize;
    while n > 0 && ((n - 1) as f64 * r).powi(2) >= need * (1.0 - 1e-12) {
        n -= 1;
    }
    while (n as f64 * r).powi(2) < need * (1.0 - 1e-12) {
        n += 1;
    }
    n
}

pub(crate) fn default_fan(dimension: usize) -> f64 {
    let n = neighbor_cutoff(&FgtConfig::new(1.0, 1, dimension));
    ((2 * n + 1) as f64).powi(dimension as i32)
}
