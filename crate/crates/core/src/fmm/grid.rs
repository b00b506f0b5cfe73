use crate::dataset::Particle;
use crate::error::{invalid, Error, Result};
use crate::real::{Complex64, Real};

/// Axis-aligned square `[origin.re, origin.re + size] x [origin.im, origin.im + size]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    pub origin: Complex64,
    pub size: f64,
}

impl Square {
    pub fn new(x0: f64, y0: f64, size: f64) -> Result<Self> {
        let s = Self {
            origin: Complex64::new(x0, y0),
            size,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn unit() -> Self {
        Self {
            origin: Complex64::new(0.0, 0.0),
            size: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.size.is_finite() && self.size > 0.0)
            || !self.origin.re.is_finite()
            || !self.origin.im.is_finite()
        {
            return Err(invalid(format!("degenerate square domain {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridBox {
    pub center: Complex64,
    pub half_width: f64,
    /// Particle indices, ascending.
    pub members: Vec<usize>,
}

/// Uniform `2^l x 2^l` partition of the domain.
///
/// Box `(ix, iy)` has id `iy * side + ix`. Boxes are half-open, so a point
/// on an interior edge belongs to the box with the larger index; points on
/// the top or right edge of the domain go to the last row/column.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDecomposition {
    pub level: u32,
    pub side: usize,
    pub domain: Square,
    pub boxes: Vec<GridBox>,
}

impl GridDecomposition {
    pub fn box_width(&self) -> f64 {
        self.domain.size / self.side as f64
    }

    pub fn num_boxes(&self) -> usize {
        self.boxes.len()
    }

    pub fn coords(&self, id: usize) -> (usize, usize) {
        (id % self.side, id / self.side)
    }

    pub fn id(&self, ix: usize, iy: usize) -> usize {
        iy * self.side + ix
    }

    /// Ids of the (up to 9) boxes in the Moore neighborhood of `id`,
    /// including `id` itself, ascending.
    pub fn moore_neighborhood(&self, id: usize) -> Vec<usize> {
        let (ix, iy) = self.coords(id);
        let mut out = Vec::with_capacity(9);
        for jy in iy.saturating_sub(1)..=(iy + 1).min(self.side - 1) {
            for jx in ix.saturating_sub(1)..=(ix + 1).min(self.side - 1) {
                out.push(self.id(jx, jy));
            }
        }
        out
    }
}

pub(crate) fn box_center(domain: &Square, side: usize, ix: usize, iy: usize) -> Complex64 {
    let w = domain.size / side as f64;
    domain.origin + Complex64::new((ix as f64 + 0.5) * w, (iy as f64 + 0.5) * w)
}

fn bin(coord: f64, lo: f64, size: f64, side: usize) -> Option<usize> {
    if !(coord >= lo && coord <= lo + size) {
        return None;
    }
    let u = (coord - lo) / size * side as f64;
    Some((u.floor() as usize).min(side - 1))
}

pub fn bin_particles<T: Real>(
    particles: &[Particle<T>],
    level: u32,
    domain: &Square,
) -> Result<GridDecomposition> {
    domain.validate()?;
    if level > 15 {
        return Err(Error::Range(format!("grid level {level} is too deep")));
    }
    let side = 1usize << level;
    let mut boxes: Vec<GridBox> = (0..side * side)
        .map(|id| GridBox {
            center: box_center(domain, side, id % side, id / side),
            half_width: domain.size / side as f64 / 2.0,
            members: Vec::new(),
        })
        .collect();
    for (index, p) in particles.iter().enumerate() {
        let x = p.position.re.to_f64().unwrap_or(f64::NAN);
        let y = p.position.im.to_f64().unwrap_or(f64::NAN);
        let ix = bin(x, domain.origin.re, domain.size, side);
        let iy = bin(y, domain.origin.im, domain.size, side);
        match (ix, iy) {
            (Some(ix), Some(iy)) => boxes[iy * side + ix].members.push(index),
            _ => return Err(Error::OutOfDomain { index }),
        }
    }
    Ok(GridDecomposition {
        level,
        side,
        domain: *domain,
        boxes,
    })
}
