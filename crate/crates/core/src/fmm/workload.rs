use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::real::{Complex, Real};

use super::expansion::MultipoleExpansion;
use super::grid::{box_center, Square};

/// One random expansion per box of `level`, centered on the box, with
/// coefficients uniform on `[-1, 1)` in both parts (ChaCha8, `seed`).
pub fn synthetic_expansions<T: Real>(
    level: u32,
    domain: &Square,
    p: usize,
    seed: u64,
) -> Vec<Option<MultipoleExpansion<T>>> {
    let side = 1usize << level;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let real = |rng: &mut ChaCha8Rng| T::from_f64_lossy(rng.gen_range(-1.0..1.0));
    (0..side * side)
        .map(|b| {
            let c = box_center(domain, side, b % side, b / side);
            let coeffs = (0..p)
                .map(|_| {
                    let re = real(&mut rng);
                    Complex::new(re, real(&mut rng))
                })
                .collect();
            Some(MultipoleExpansion {
                center: Complex::new(T::from_f64_lossy(c.re), T::from_f64_lossy(c.im)),
                coeffs,
            })
        })
        .collect()
}
