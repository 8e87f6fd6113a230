//! Scalar abstraction for the numerical core.
//!
//! Everything downstream (fields, operators, solvers, quadratures) is generic
//! over [`Scalar`], so the whole pipeline runs in `f32` or `f64`. The crate
//! root exports `f64` aliases for the common types.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, for literals and grid arithmetic.
    #[inline]
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    /// Lossy conversion to `f64`, for serialization and reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("f64 conversion")
    }

    /// Lossy conversion from `usize` (grid counts entering formulas).
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for `S::from_f64_lossy`, used pervasively for constants.
#[inline]
pub fn lit<S: Scalar>(x: f64) -> S {
    S::from_f64_lossy(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lit_round_trips_for_both_widths() {
        assert_eq!(lit::<f64>(0.25), 0.25);
        assert_eq!(lit::<f32>(0.25), 0.25f32);
    }

    #[test]
    fn usize_conversion() {
        assert_eq!(f64::from_usize_lossy(33), 33.0);
    }
}
