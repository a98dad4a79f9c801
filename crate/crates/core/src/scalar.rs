//! Scalar abstraction used by the generic numerical routines.
//!
//! Everything in this crate that does real arithmetic is generic over a
//! type implementing [`Real`]. In practice the two instantiations are
//! `f64` (the default throughout the crate-root aliases) and [`Dd`], a
//! double-double type with roughly 31 significant digits used by the
//! high-precision rung of the orthogonal-polynomial ladder. `f32` also
//! satisfies the bound and is exercised in tests, though the shipped
//! tolerances assume at least `f64`.

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Double-double scalar: an unevaluated sum of two `f64` values giving
/// about 106 bits of significand.
pub type Dd = twofloat::TwoFloat;

/// Trait bound for scalars accepted by the generic numerical routines.
///
/// This is a pure trait alias: any `Float + FromPrimitive` type with the
/// usual auto-traits qualifies, and a blanket impl provides it.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Converts an `f64` constant into the working scalar type.
///
/// Panics only if the target type cannot represent ordinary finite `f64`
/// values, which none of the supported instantiations do.
#[inline]
pub fn r<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("scalar type must convert from f64")
}

/// Converts a `usize` into the working scalar type.
#[inline]
pub fn ru<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("scalar type must convert from usize")
}

/// Converts the working scalar to `f64` (used at reporting boundaries).
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("scalar type must convert to f64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip() {
        let x: f64 = r(0.625);
        assert_eq!(x, 0.625);
        assert_eq!(to_f64(x), 0.625);
    }

    #[test]
    fn dd_roundtrip_and_arithmetic() {
        let x: Dd = r(0.1);
        let y: Dd = r(0.2);
        let z = x + y;
        // double-double resolves the f64 representation error of 0.1 + 0.2
        let diff = to_f64(z - r::<Dd>(0.3));
        assert!(diff.abs() < 1e-30, "diff = {diff:e}");
    }

    #[test]
    fn dd_is_float() {
        fn hypot_generic<T: Real>(a: T, b: T) -> T {
            (a * a + b * b).sqrt()
        }
        let h = hypot_generic(r::<Dd>(3.0), r::<Dd>(4.0));
        assert!(to_f64(h - r::<Dd>(5.0)).abs() < 1e-30);
    }

    #[test]
    fn f32_satisfies_real() {
        fn sum3<T: Real>(a: T, b: T, c: T) -> T {
            a + b + c
        }
        let s = sum3(1.0f32, 2.0f32, 3.0f32);
        assert_eq!(s, 6.0f32);
    }
}
