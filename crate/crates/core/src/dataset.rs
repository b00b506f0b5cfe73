//! Source/target types and seeded synthetic point clouds.
//!
//! Datasets come from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. ChaCha is counter based and its output stream is
//! fixed across platforms, so a [`DatasetSpec`] always produces the same bits.
//! Points are drawn sequentially: for each point, one uniform `[0, 1)` draw per
//! axis, then the weight draw (if the weight mode needs one).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::real::{cast_complex, Complex, Real};

/// A weighted point in the plane, position stored as a complex coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle<T = f64> {
    pub position: Complex<T>,
    pub weight: T,
}

impl<T: Real> Particle<T> {
    pub fn new(x: T, y: T, weight: T) -> Self {
        Self {
            position: Complex::new(x, y),
            weight,
        }
    }

    pub fn cast<U: Real>(&self) -> Particle<U> {
        Particle {
            position: cast_complex(self.position),
            weight: U::from_f64_lossy(self.weight.to_f64().unwrap_or(f64::NAN)),
        }
    }
}

/// A weighted point in `d` dimensions (the Gaussian transform's sources).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSource {
    pub position: Vec<f64>,
    pub weight: f64,
}

impl GaussianSource {
    pub fn new(position: Vec<f64>, weight: f64) -> Self {
        Self { position, weight }
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// Every weight is 1.
    #[default]
    Unit,
    /// Uniform on `[0, 1)`.
    Uniform01,
    /// `+1` or `-1` with equal probability.
    Signed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub count: usize,
    pub dimension: usize,
    pub seed: u64,
    pub weight_mode: WeightMode,
}

/// Axis-aligned box `[lo_i, hi_i]` per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let d = Self { lo, hi };
        d.validate()?;
        Ok(d)
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo.is_empty() || self.lo.len() != self.hi.len() {
            return Err(invalid("domain bounds must be non-empty and of equal length"));
        }
        for (axis, (l, h)) in self.lo.iter().zip(&self.hi).enumerate() {
            if !(l.is_finite() && h.is_finite() && h > l) {
                return Err(invalid(format!(
                    "domain axis {axis} is degenerate: [{l}, {h}]"
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| *v >= *l && *v <= *h)
    }
}

/// Generates `spec.count` uniformly distributed weighted points.
pub fn generate_sources(spec: &DatasetSpec, domain: &BoxDomain) -> Result<Vec<GaussianSource>> {
    domain.validate()?;
    if spec.dimension == 0 || spec.dimension != domain.dim() {
        return Err(invalid(format!(
            "dataset dimension {} does not match the {}-dimensional domain",
            spec.dimension,
            domain.dim()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let position = domain
            .lo
            .iter()
            .zip(&domain.hi)
            .map(|(l, h)| {
                let u: f64 = rng.gen();
                // lo + u * (hi - lo) stays in [lo, hi] under rounding
                (l + u * (h - l)).min(*h)
            })
            .collect();
        let weight = match spec.weight_mode {
            WeightMode::Unit => 1.0,
            WeightMode::Uniform01 => rng.gen::<f64>(),
            WeightMode::Signed => {
                if rng.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        out.push(GaussianSource { position, weight });
    }
    Ok(out)
}

/// Two-dimensional variant returning complex-coordinate particles.
pub fn generate_particles(spec: &DatasetSpec, domain: &BoxDomain) -> Result<Vec<Particle>> {
    if spec.dimension != 2 {
        return Err(invalid("particles are two-dimensional"));
    }
    Ok(generate_sources(spec, domain)?
        .into_iter()
        .map(|s| Particle::new(s.position[0], s.position[1], s.weight))
        .collect())
}

/// Unweighted target points with the same generator (weights discarded).
pub fn generate_points(spec: &DatasetSpec, domain: &BoxDomain) -> Result<Vec<Vec<f64>>> {
    Ok(generate_sources(spec, domain)?
        .into_iter()
        .map(|s| s.position)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(count: usize, seed: u64, weight_mode: WeightMode) -> DatasetSpec {
        DatasetSpec {
            count,
            dimension: 2,
            seed,
            weight_mode,
        }
    }

    #[test]
    fn empty_dataset() {
        let d = generate_sources(&spec(0, 1, WeightMode::Unit), &BoxDomain::unit(2)).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let s = spec(500, 42, WeightMode::Signed);
        let a = generate_particles(&s, &BoxDomain::unit(2)).unwrap();
        let b = generate_particles(&s, &BoxDomain::unit(2)).unwrap();
        assert_eq!(a, b);
        let c = generate_particles(&spec(500, 43, WeightMode::Signed), &BoxDomain::unit(2)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn stays_inside_unit_square() {
        let d = generate_sources(&spec(10_000, 9, WeightMode::Unit), &BoxDomain::unit(2)).unwrap();
        assert!(d.iter().all(|s| BoxDomain::unit(2).contains(&s.position)));
        assert!(d.iter().all(|s| s.weight == 1.0));
    }

    #[test]
    fn weight_modes() {
        let dom = BoxDomain::unit(2);
        let u = generate_sources(&spec(2000, 3, WeightMode::Uniform01), &dom).unwrap();
        assert!(u.iter().all(|s| (0.0..1.0).contains(&s.weight)));
        let s = generate_sources(&spec(2000, 3, WeightMode::Signed), &dom).unwrap();
        assert!(s.iter().all(|s| s.weight == 1.0 || s.weight == -1.0));
        let pos = s.iter().filter(|s| s.weight > 0.0).count();
        assert!((800..1200).contains(&pos));
    }

    #[test]
    fn degenerate_domain_rejected() {
        let dom = BoxDomain {
            lo: vec![0.0, 1.0],
            hi: vec![1.0, 1.0],
        };
        assert!(generate_sources(&spec(1, 1, WeightMode::Unit), &dom).is_err());
        assert!(BoxDomain::new(vec![0.0], vec![-1.0]).is_err());
    }

    #[test]
    fn shifted_domain() {
        let dom = BoxDomain::new(vec![-2.0, 5.0, 0.0], vec![-1.0, 6.0, 0.5]).unwrap();
        let s = DatasetSpec {
            count: 1000,
            dimension: 3,
            seed: 5,
            weight_mode: WeightMode::Unit,
        };
        let pts = generate_points(&s, &dom).unwrap();
        assert!(pts.iter().all(|p| dom.contains(p)));
    }
}
