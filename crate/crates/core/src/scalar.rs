//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the engine can run on.
///
/// Everything in the crate is written against this trait; `f64` is the
/// production instantiation and `f32` is supported for reduced-precision
/// experiments.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target cannot represent
    /// finite `f64` values at all, which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar type cannot represent f64 literal")
    }

    /// Lossy conversion back to `f64` for reporting and special functions.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance used for the engine's exact-in-reals equalities:
    /// `1e-9`, widened to a few hundred ulps for low-precision types.
    #[inline]
    fn rel_tolerance() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(256.0))
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Midpoint `(a + b) / 2`, evaluated in that exact order everywhere the
    /// crate needs it so that reductions are bit-reproducible.
    #[inline]
    fn midpoint(a: Self, b: Self) -> Self {
        (a + b) / Self::two()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `|a - b| <= tol * (1 + max(|a|, |b|))`.
pub fn approx_eq<T: Scalar>(a: T, b: T, tol: T) -> bool {
    (a - b).abs() <= tol * (T::one() + a.abs().max(b.abs()))
}
