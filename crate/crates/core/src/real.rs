//! Floating-point abstraction shared by the FMM kernels.
//!
//! Kernels are generic over [`Real`] so the M2L batch can run in single
//! precision for throughput comparisons; every accuracy check runs in `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

pub use num_complex::Complex;

/// 64-bit complex number, the default coordinate and coefficient type.
pub type Complex64 = Complex<f64>;

pub trait Real:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Short label used in reports.
    const NAME: &'static str;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts")
    }

    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize converts")
    }
}

impl Real for f64 {
    const NAME: &'static str = "f64";
}

impl Real for f32 {
    const NAME: &'static str = "f32";
}

/// Floating-point precision selector used by configuration and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    #[default]
    F64,
}

impl Precision {
    pub fn as_str(self) -> &'static str {
        match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
        }
    }

    pub fn bytes(self) -> usize {
        match self {
            Precision::F32 => 4,
            Precision::F64 => 8,
        }
    }
}

/// Converts a complex value between precisions.
pub fn cast_complex<A: Real, B: Real>(z: Complex<A>) -> Complex<B> {
    Complex::new(
        B::from_f64_lossy(z.re.to_f64().unwrap_or(f64::NAN)),
        B::from_f64_lossy(z.im.to_f64().unwrap_or(f64::NAN)),
    )
}
