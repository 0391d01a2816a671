//! Simulation of a Mach-Zehnder interferometer with a weakly nonlinear
//! cavity in one arm and a linear cavity in the other: Lindblad steady
//! states, mixed-output photon statistics g2(0) and g2(tau), interference
//! blockade working points, and angular-velocity / temperature sensing
//! built on the correlation function's parameter sensitivity.
//!
//! All core math is generic over the real scalar (`f32`/`f64`) through the
//! [`scalar::Real`] trait; the `*64` aliases at the crate root are the
//! reference instantiation used by the CLI and the documented tolerances.

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod interferometer;
pub mod linalg;
pub mod params;
pub mod point;
pub mod scalar;
pub mod sensing;

pub use error::{Error, Result};
pub use fock::{FockSpace, Mode};
pub use scalar::{Real, C};

/// Reference-precision complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Reference-precision system parameters.
pub type Params64 = params::SystemParams<f64>;
/// Reference-precision operator matrix.
pub type Operator64 = fock::Operator<f64>;
/// Reference-precision Liouvillian.
pub type Liouvillian64 = dynamics::Liouvillian<f64>;
/// Reference-precision density matrix.
pub type DensityMatrix64 = dynamics::DensityMatrix<f64>;
/// Reference-precision output field.
pub type OutputField64 = interferometer::OutputField<f64>;
