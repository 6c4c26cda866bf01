//! Scalar abstraction for the numeric core.

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating-point scalar the core math is generic over.
///
/// `f64` is the default used by the CLI and every file format. `f32` is
/// supported for the math itself, but bit widths above its 24-bit
/// significand lose grid precision, so stick to `f64` for wide
/// allocations.
///
/// `Float::round` rounds half away from zero for `f32`/`f64`, which is
/// the rounding rule the quantizer is specified against.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssignOps + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used at file-format boundaries.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from(v).expect("f64 converts to scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for `T::from_f64_lossy` in expression position.
pub fn cast<T: Scalar>(v: f64) -> T {
    T::from_f64_lossy(v)
}
