//! Physical parameters of the driven two-cavity system.
//!
//! All rates and detunings are expressed in units of the mirror decay rate
//! kappa; the default values correspond to the weak-drive working point used
//! throughout (kappa1 = kappa2 = 1, eps = 0.1, Kerr strength 0.02).

use crate::error::{Error, Result};
use crate::scalar::{re, Real};

/// Drive, detuning, nonlinearity, decay, and output-phase parameters.
///
/// `delta2` is always derived as `delta1 + delta` and never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T: Real> {
    /// Probe detuning of cavity 1 (units of kappa).
    pub delta1: T,
    /// Detuning between the two cavity modes (units of kappa).
    pub delta: T,
    /// Kerr interaction strength in cavity 1 (units of kappa, >= 0).
    pub u: T,
    /// Drive amplitude on each cavity (units of kappa, >= 0).
    pub eps: T,
    /// Mirror decay rate of cavity 1 (units of kappa, > 0).
    pub kappa1: T,
    /// Mirror decay rate of cavity 2 (units of kappa, > 0).
    pub kappa2: T,
    /// Relative phase between the two output arms (radians).
    pub phi: T,
}

impl<T: Real> Default for SystemParams<T> {
    fn default() -> Self {
        Self {
            delta1: T::zero(),
            delta: re(-0.47),
            u: re(0.02),
            eps: re(0.1),
            kappa1: T::one(),
            kappa2: T::one(),
            phi: re::<T>(0.824) * T::PI(),
        }
    }
}

impl<T: Real> SystemParams<T> {
    /// Probe detuning of cavity 2: `delta1 + delta`.
    pub fn delta2(&self) -> T {
        self.delta1 + self.delta
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.delta1,
            self.delta,
            self.u,
            self.eps,
            self.kappa1,
            self.kappa2,
            self.phi,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite parameter".into()));
        }
        if !(self.kappa1 > T::zero()) || !(self.kappa2 > T::zero()) {
            return Err(Error::InvalidArgument(
                "decay rates kappa1, kappa2 must be positive".into(),
            ));
        }
        if self.u < T::zero() {
            return Err(Error::InvalidArgument("Kerr strength u must be >= 0".into()));
        }
        if self.eps < T::zero() {
            return Err(Error::InvalidArgument("drive eps must be >= 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta2_is_derived() {
        let p = SystemParams::<f64> {
            delta1: 0.3,
            delta: -0.5,
            ..Default::default()
        };
        assert_eq!(p.delta2(), -0.2);
    }

    #[test]
    fn rejects_nonpositive_decay() {
        let p = SystemParams::<f64> {
            kappa1: 0.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = SystemParams::<f64> {
            kappa2: -1.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_negative_drive_and_kerr() {
        assert!(SystemParams::<f64> { u: -0.1, ..Default::default() }.validate().is_err());
        assert!(SystemParams::<f64> { eps: -0.1, ..Default::default() }.validate().is_err());
        assert!(SystemParams::<f64>::default().validate().is_ok());
    }
}
