//! Scalar abstraction: all core math is generic over the real field.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};
use std::fmt::{Debug, Display};

/// Real scalar type backing every matrix and parameter in the crate.
///
/// Implemented for `f32` and `f64`; `f64` is the reference precision and the
/// one the documented tolerances refer to.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssignOps
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate's scalar.
pub type C<T> = Complex<T>;

/// Shorthand for lossy f64 -> T conversion of exact literals.
#[inline]
pub fn re<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Complex literal from f64 parts.
#[inline]
pub fn cx<T: Real>(re_part: f64, im_part: f64) -> C<T> {
    C::new(re(re_part), re(im_part))
}

/// Scale a reference f64 tolerance to the working precision.
///
/// For `f64` this returns the tolerance unchanged; for coarser scalars it
/// grows proportionally to the epsilon ratio so invariant checks stay
/// meaningful.
#[inline]
pub fn scaled_tol<T: Real>(tol_f64: f64) -> T {
    let ratio = T::epsilon().to_f64().unwrap() / f64::EPSILON;
    re(tol_f64 * ratio.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_scaling_is_identity_for_f64() {
        assert_eq!(scaled_tol::<f64>(1e-10), 1e-10);
    }

    #[test]
    fn tolerance_scaling_loosens_for_f32() {
        let t = scaled_tol::<f32>(1e-10);
        assert!(t > 1e-4 && t < 1.0);
    }
}
