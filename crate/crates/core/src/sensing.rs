//! Measurand-to-parameter maps for angular-velocity and temperature sensing,
//! response curves, and finite-difference sensitivity coefficients.

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::point::{measure, Observable, SteadySolver};
use crate::scalar::{re, Real};
use rayon::prelude::*;

/// Speed of light in vacuum (m/s, CODATA).
pub const LIGHT_SPEED: f64 = 2.997_924_58e8;

/// Rotating-platform model: the measurand is the angular velocity (rad/s),
/// entering through the rotation-induced phase `4 pi A Omega / (lambda0 c)`
/// added onto the bias phase.
#[derive(Debug, Clone, Copy)]
pub struct GyroscopeModel<T: Real> {
    /// Enclosed area of the optical path (m^2).
    pub area: T,
    /// Probe wavelength (m).
    pub lambda0: T,
    /// Bias output phase at rest (rad).
    pub phi0: T,
    /// Speed of light (m/s).
    pub light_speed: T,
}

impl<T: Real> GyroscopeModel<T> {
    pub fn new(area: T, lambda0: T, phi0: T) -> Result<Self> {
        if !(area > T::zero()) || !(lambda0 > T::zero()) {
            return Err(Error::InvalidArgument(
                "gyroscope area and wavelength must be positive".into(),
            ));
        }
        Ok(Self {
            area,
            lambda0,
            phi0,
            light_speed: re(LIGHT_SPEED),
        })
    }
}

impl<T: Real> Default for GyroscopeModel<T> {
    /// Enclosed area 10^3 m^2, 1550 nm probe, bias phase 0.85 pi.
    fn default() -> Self {
        Self::new(re(1e3), re(1550e-9), re::<T>(0.85) * T::PI()).unwrap()
    }
}

/// Rotation-induced phase `4 pi A Omega / (lambda0 c)` (radians).
pub fn sagnac_phase<T: Real>(g: &GyroscopeModel<T>, omega: T) -> T {
    let four_pi = re::<T>(4.0) * T::PI();
    four_pi * g.area * omega / (g.lambda0 * g.light_speed)
}

/// Parameters seen by the optical system at rotation rate `omega`.
pub fn gyro_params<T: Real>(
    g: &GyroscopeModel<T>,
    omega: T,
    base: &SystemParams<T>,
) -> SystemParams<T> {
    SystemParams {
        phi: g.phi0 + sagnac_phase(g, omega),
        ..*base
    }
}

/// Dielectric-layer thermometer model: thermal expansion and the
/// thermo-optic index shift move the second cavity's resonance, entering as
/// a temperature-dependent detuning on top of the reference detuning.
#[derive(Debug, Clone, Copy)]
pub struct ThermometerModel<T: Real> {
    /// Layer thickness at the reference temperature (m).
    pub d0: T,
    /// Cavity length (m).
    pub cavity_len: T,
    /// Thermal expansion coefficient (1/degC).
    pub alpha: T,
    /// Thermo-optic coefficient (1/degC).
    pub beta: T,
    /// Refractive index at the reference temperature.
    pub n0: T,
    /// Cavity resonance in decay-rate units.
    pub omega2_over_kappa: T,
    /// Reference inter-cavity detuning (units of kappa).
    pub delta0: T,
}

impl<T: Real> ThermometerModel<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        d0: T,
        cavity_len: T,
        alpha: T,
        beta: T,
        n0: T,
        omega2_over_kappa: T,
        delta0: T,
    ) -> Result<Self> {
        if !(d0 > T::zero()) || !(cavity_len > T::zero()) || d0 >= cavity_len {
            return Err(Error::InvalidArgument(
                "layer thickness must satisfy 0 < d0 < cavity length".into(),
            ));
        }
        if !(n0 > T::one()) {
            return Err(Error::InvalidArgument(
                "refractive index n0 must exceed 1".into(),
            ));
        }
        if !(omega2_over_kappa > T::zero()) {
            return Err(Error::InvalidArgument(
                "omega2/kappa must be positive".into(),
            ));
        }
        Ok(Self {
            d0,
            cavity_len,
            alpha,
            beta,
            n0,
            omega2_over_kappa,
            delta0,
        })
    }
}

impl<T: Real> Default for ThermometerModel<T> {
    /// Silica layer: d0 = 0.01 mm in a 1 mm cavity, alpha = 5.5e-7 /degC,
    /// beta = 1.0e-5 /degC, n0 = 1.45, omega2 = 1e7 kappa, delta0 = -0.56.
    fn default() -> Self {
        Self::new(
            re(1e-5),
            re(1e-3),
            re(5.5e-7),
            re(1.0e-5),
            re(1.45),
            re(1e7),
            re(-0.56),
        )
        .unwrap()
    }
}

/// Temperature-induced cavity detuning shift (units of kappa):
/// `-omega2 [ (n0 d0 / L) beta + ((n0 - 1) d0 / L) alpha ] dT`.
pub fn thermal_detuning<T: Real>(t: &ThermometerModel<T>, delta_t: T) -> T {
    let geometric = t.d0 / t.cavity_len;
    let slope = t.n0 * geometric * t.beta + (t.n0 - T::one()) * geometric * t.alpha;
    -t.omega2_over_kappa * slope * delta_t
}

/// Parameters seen by the optical system at temperature offset `delta_t`.
pub fn thermo_params<T: Real>(
    t: &ThermometerModel<T>,
    delta_t: T,
    base: &SystemParams<T>,
) -> SystemParams<T> {
    SystemParams {
        delta: t.delta0 + thermal_detuning(t, delta_t),
        ..*base
    }
}

/// Either sensing front-end, mapping a measurand onto system parameters.
#[derive(Debug, Clone, Copy)]
pub enum SensorModel<T: Real> {
    Gyroscope(GyroscopeModel<T>),
    Thermometer(ThermometerModel<T>),
}

impl<T: Real> SensorModel<T> {
    pub fn params_at(&self, measurand: T, base: &SystemParams<T>) -> SystemParams<T> {
        match self {
            SensorModel::Gyroscope(g) => gyro_params(g, measurand, base),
            SensorModel::Thermometer(t) => thermo_params(t, measurand, base),
        }
    }

    /// Base finite-difference step; 1e-6 rad/s for rotation, 1e-4 degC for
    /// temperature (1e-4 of the respective response-feature widths).
    pub fn default_step(&self) -> T {
        match self {
            SensorModel::Gyroscope(_) => re(1e-6),
            SensorModel::Thermometer(_) => re(1e-4),
        }
    }
}

/// One row of a response table; solver failures are annotated, not fatal.
#[derive(Debug, Clone)]
pub struct ResponsePoint<T: Real> {
    pub measurand: T,
    pub value: std::result::Result<T, String>,
}

/// Observable response over a measurand grid, one steady-state solve per
/// grid point (shared through the solver cache when the generator repeats).
pub fn response_curve<T: Real>(
    model: &SensorModel<T>,
    grid: &[T],
    base: &SystemParams<T>,
    observable: Observable,
    solver: &SteadySolver<T>,
) -> Vec<ResponsePoint<T>> {
    grid.par_iter()
        .map(|&x| {
            let p = model.params_at(x, base);
            let value = solver
                .solve(&p)
                .and_then(|solved| measure(&solved, &p, observable))
                .map_err(|e| e.to_string());
            ResponsePoint {
                measurand: x,
                value,
            }
        })
        .collect()
}

/// Sensitivity coefficient `d(observable)/d(measurand)` by central
/// differences with one Richardson refinement: `(4 D(h/2) - D(h)) / 3`.
pub fn sensitivity<T: Real>(
    model: &SensorModel<T>,
    measurand: T,
    base: &SystemParams<T>,
    observable: Observable,
    solver: &SteadySolver<T>,
) -> Result<T> {
    sensitivity_with_step(model, measurand, base, observable, solver, model.default_step())
}

/// [`sensitivity`] with an explicit base step.
pub fn sensitivity_with_step<T: Real>(
    model: &SensorModel<T>,
    measurand: T,
    base: &SystemParams<T>,
    observable: Observable,
    solver: &SteadySolver<T>,
    step: T,
) -> Result<T> {
    let half = step / (T::one() + T::one());
    if !(step > T::zero()) || measurand + half == measurand || measurand - half == measurand {
        return Err(Error::InvalidStep {
            step: step.to_f64().unwrap_or(f64::NAN),
            measurand: measurand.to_f64().unwrap_or(f64::NAN),
        });
    }
    let eval = |x: T| -> Result<T> {
        let p = model.params_at(x, base);
        let solved = solver.solve(&p)?;
        measure(&solved, &p, observable)
    };
    let d_full = (eval(measurand + step)? - eval(measurand - step)?) / (step + step);
    let d_half = (eval(measurand + half)? - eval(measurand - half)?) / (step);
    let four = re::<T>(4.0);
    let three = re::<T>(3.0);
    Ok((four * d_half - d_full) / three)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gyro() -> GyroscopeModel<f64> {
        GyroscopeModel::default()
    }

    fn thermo() -> ThermometerModel<f64> {
        ThermometerModel::default()
    }

    #[test]
    fn rotation_phase_reference_values() {
        let g = gyro();
        assert_eq!(sagnac_phase(&g, 0.0), 0.0);
        let earth = sagnac_phase(&g, 7.3e-5);
        assert!((earth - 1.9742e-3).abs() < 5e-7);
        assert!(sagnac_phase(&g, -7.3e-5) < 0.0);
        assert_eq!(sagnac_phase(&g, -7.3e-5), -earth);
    }

    #[test]
    fn rotation_phase_is_exactly_linear() {
        let g = gyro();
        let h = 3.7e-4;
        // collinearity through 0, h, 2h
        assert_eq!(sagnac_phase(&g, 2.0 * h), 2.0 * sagnac_phase(&g, h));
    }

    #[test]
    fn gyro_params_compose_bias_and_rotation() {
        let g = gyro();
        let base = SystemParams::<f64>::default();
        let at_rest = gyro_params(&g, 0.0, &base);
        assert_eq!(at_rest.phi, 0.85 * std::f64::consts::PI);
        let spinning = gyro_params(&g, 7.3e-5, &base);
        assert!((spinning.phi - (0.85 * std::f64::consts::PI + 1.9742e-3)).abs() < 5e-7);
        assert_eq!(spinning.delta, base.delta);
        assert_eq!(spinning.u, base.u);
        assert_eq!(spinning.eps, base.eps);
    }

    #[test]
    fn thermal_detuning_reference_slope() {
        let t = thermo();
        assert_eq!(thermal_detuning(&t, 0.0), 0.0);
        // -1e7 * (1.45 * 0.01 * 1e-5 + 0.45 * 0.01 * 5.5e-7) per degC
        let slope = thermal_detuning(&t, 1.0);
        assert!((slope - (-1.47475)).abs() < 1e-10);

        let mut doubled = t;
        doubled.d0 = 2.0 * t.d0;
        assert!((thermal_detuning(&doubled, 1.0) - 2.0 * slope).abs() < 1e-12);
    }

    #[test]
    fn thermo_params_shift_the_detuning() {
        let t = thermo();
        let base = SystemParams::<f64>::default();
        let at_ref = thermo_params(&t, 0.0, &base);
        assert_eq!(at_ref.delta, -0.56);
        let warmer = thermo_params(&t, 0.1, &base);
        assert!(warmer.delta < -0.56);
        assert_eq!(warmer.phi, base.phi);
        assert_eq!(warmer.u, base.u);
    }

    #[test]
    fn model_validation() {
        assert!(GyroscopeModel::new(0.0, 1550e-9, 0.0).is_err());
        assert!(ThermometerModel::new(1e-3, 1e-3, 0.0, 0.0, 1.45, 1e7, 0.0).is_err());
        assert!(ThermometerModel::new(1e-5, 1e-3, 0.0, 0.0, 0.9, 1e7, 0.0).is_err());
    }

    #[test]
    fn degenerate_grid_gives_one_row() {
        let solver = SteadySolver::new(2, false);
        let model = SensorModel::Gyroscope(gyro());
        let base = SystemParams::<f64>::default();
        let rows = response_curve(&model, &[0.0], &base, Observable::Intensity, &solver);
        assert_eq!(rows.len(), 1);
        assert!(rows[0].value.is_ok());
    }

    #[test]
    fn step_underflow_is_reported() {
        let solver = SteadySolver::new(2, false);
        let model = SensorModel::Gyroscope(gyro());
        let base = SystemParams::<f64>::default();
        let err = sensitivity_with_step(&model, 1.0, &base, Observable::Intensity, &solver, 1e-18);
        assert!(matches!(err, Err(Error::InvalidStep { .. })));
    }
}
