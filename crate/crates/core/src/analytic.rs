//! Closed-form weak-drive theory of the mixed output field.
//!
//! A two-photon-truncated ansatz for the non-Hermitian-evolution steady state
//! yields closed-form probability amplitudes, approximate intensity and
//! g2(0), and the interference condition whose zeros define the blockade
//! working points. The closed forms are derived under `delta1 = 0` and
//! `kappa1 = kappa2`; calls outside that regime fail rather than
//! extrapolating silently.

use crate::dynamics::{build_liouvillian, steady_state};
use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::interferometer::{g2_zero, output_operator, Port};
use crate::params::SystemParams;
use crate::scalar::{re, scaled_tol, C, Real};

/// Steady-state amplitudes of the two-photon ansatz, with `c00 ~ 1`.
#[derive(Debug, Clone, Copy)]
pub struct WeakDriveAmplitudes<T: Real> {
    pub c00: C<T>,
    pub c10: C<T>,
    pub c01: C<T>,
    pub c20: C<T>,
    pub c11: C<T>,
    pub c02: C<T>,
}

fn require_closed_form_regime<T: Real>(p: &SystemParams<T>) -> Result<T> {
    p.validate()?;
    if p.delta1 != T::zero() {
        return Err(Error::UnsupportedRegime(
            "closed forms assume delta1 = 0".into(),
        ));
    }
    if p.kappa1 != p.kappa2 {
        return Err(Error::UnsupportedRegime(
            "closed forms assume kappa1 = kappa2".into(),
        ));
    }
    Ok(p.kappa1)
}

/// Closed-form steady-state amplitudes.
pub fn amplitudes<T: Real>(p: &SystemParams<T>) -> Result<WeakDriveAmplitudes<T>> {
    let kappa = require_closed_form_regime(p)?;
    let one = T::one();
    let zero = T::zero();
    let i = C::new(zero, one);
    let eps = C::new(p.eps, zero);
    let k = C::new(kappa, zero);
    let u = C::new(p.u, zero);
    let d_minus_ik = C::new(p.delta, -kappa);
    let sqrt2 = C::new((one + one).sqrt(), zero);

    let c00 = C::new(one, zero);
    let c10 = eps / k;
    let c01 = -i * eps / d_minus_ik;
    let c20 = -i / (u - i * k) * eps * eps / (sqrt2 * k);
    let c02 = -(eps * eps) / (sqrt2 * d_minus_ik * d_minus_ik);
    let c11 = -i * eps * eps / (k * d_minus_ik);
    Ok(WeakDriveAmplitudes {
        c00,
        c10,
        c01,
        c20,
        c11,
        c02,
    })
}

/// Residuals of the five steady-state amplitude equations when the closed
/// forms are substituted back; all vanish for a correct solution.
pub fn steady_equation_residuals<T: Real>(
    amps: &WeakDriveAmplitudes<T>,
    p: &SystemParams<T>,
) -> Result<[C<T>; 5]> {
    let kappa = require_closed_form_regime(p)?;
    let zero = T::zero();
    let i = C::new(zero, T::one());
    let eps = C::new(p.eps, zero);
    let two = T::one() + T::one();
    let sqrt2 = C::new(two.sqrt(), zero);
    let d1 = C::new(p.delta1, -kappa);
    let d2 = C::new(p.delta2(), -kappa);
    let d20 = C::new(two * p.delta1 + two * p.u, -two * kappa);
    let d02 = C::new(two * p.delta2(), -two * kappa);
    let d11 = C::new(p.delta1 + p.delta2(), -two * kappa);

    Ok([
        d1 * amps.c10 + i * eps * amps.c00,
        d2 * amps.c01 + i * eps * amps.c00,
        d20 * amps.c20 + i * sqrt2 * eps * amps.c10,
        d02 * amps.c02 + i * sqrt2 * eps * amps.c01,
        d11 * amps.c11 + i * eps * amps.c10 + i * eps * amps.c01,
    ])
}

/// Weak-drive output intensity `N_out/kappa ~ |c10 + e^{i phi} c01|^2 / 2`.
pub fn analytic_intensity<T: Real>(amps: &WeakDriveAmplitudes<T>, p: &SystemParams<T>) -> T {
    let phase = C::from_polar(T::one(), p.phi);
    let amp = amps.c10 + phase * amps.c01;
    amp.norm_sqr() / (T::one() + T::one())
}

/// Two-photon interference sum `c20 + sqrt(2) e^{i phi} c11 + e^{2 i phi} c02`;
/// its zero is the blockade condition.
pub fn blockade_residual<T: Real>(amps: &WeakDriveAmplitudes<T>, p: &SystemParams<T>) -> C<T> {
    let phase = C::from_polar(T::one(), p.phi);
    let phase2 = C::from_polar(T::one(), p.phi + p.phi);
    let sqrt2 = C::new((T::one() + T::one()).sqrt(), T::zero());
    amps.c20 + sqrt2 * phase * amps.c11 + phase2 * amps.c02
}

/// Weak-drive zero-delay correlation
/// `g2 ~ 2 |c20 + sqrt(2) e^{i phi} c11 + e^{2 i phi} c02|^2 / |c10 + e^{i phi} c01|^4`.
pub fn analytic_g2<T: Real>(amps: &WeakDriveAmplitudes<T>, p: &SystemParams<T>) -> Result<T> {
    let phase = C::from_polar(T::one(), p.phi);
    let single = (amps.c10 + phase * amps.c01).norm_sqr();
    if single * single < scaled_tol::<T>(1e-14) {
        return Err(Error::UndefinedCorrelation);
    }
    let two_photon = blockade_residual(amps, p).norm_sqr();
    Ok((T::one() + T::one()) * two_photon / (single * single))
}

/// Asymptotic optimal detunings `+-sqrt((sqrt(2u) - u) / (1 - sqrt(2u) + u))`
/// (units of kappa), returned as `(negative, positive)`.
pub fn optimal_detuning<T: Real>(u_over_kappa: T) -> Result<(T, T)> {
    let half = re::<T>(0.5);
    if !(u_over_kappa > T::zero()) || !(u_over_kappa < half) {
        return Err(Error::InvalidArgument(format!(
            "optimal detuning requires 0 < u/kappa < 1/2, got {u_over_kappa}"
        )));
    }
    let two = T::one() + T::one();
    let root = (two * u_over_kappa).sqrt();
    let num = root - u_over_kappa;
    let den = T::one() - root + u_over_kappa;
    let d = (num / den).sqrt();
    Ok((-d, d))
}

/// Asymptotic optimal phase
/// `arg[-(1 + i delta/kappa)(1 - e^{i pi/4} sqrt(u/kappa))]`, in `[0, 2 pi)`.
pub fn optimal_phase<T: Real>(u_over_kappa: T, delta_over_kappa: T) -> Result<T> {
    if u_over_kappa < T::zero() {
        return Err(Error::InvalidArgument(
            "u/kappa must be non-negative".into(),
        ));
    }
    let quarter_pi = T::PI() / re::<T>(4.0);
    let factor1 = C::new(T::one(), delta_over_kappa);
    let factor2 = C::new(T::one(), T::zero())
        - C::from_polar(u_over_kappa.sqrt(), quarter_pi);
    let z = -(factor1 * factor2);
    let mut phi = z.arg();
    let two_pi = T::PI() + T::PI();
    while phi < T::zero() {
        phi = phi + two_pi;
    }
    while phi >= two_pi {
        phi = phi - two_pi;
    }
    Ok(phi)
}

/// Numerically refined blockade optimum at finite drive.
#[derive(Debug, Clone, Copy)]
pub struct RefinedOptimum<T: Real> {
    pub delta: T,
    pub phi: T,
    pub g2: T,
}

/// Coordinate-refined grid search of the full numeric `g2(0)` over
/// `(delta, phi)`, started from (and spanning around) the given center.
///
/// Each round solves one steady state per detuning sample and scans the
/// phase axis on that solution (the generator does not depend on `phi`),
/// then shrinks both spans around the best point.
pub fn refine_g2_minimum<T: Real>(
    base: &SystemParams<T>,
    n_max: usize,
    center: (T, T),
    span: (T, T),
    rounds: usize,
) -> Result<RefinedOptimum<T>> {
    let space = FockSpace::new(n_max)?;
    let ticks = 11usize;
    let mut center = center;
    let mut span = span;
    let mut best = RefinedOptimum {
        delta: center.0,
        phi: center.1,
        g2: T::infinity(),
    };
    for _round in 0..rounds {
        let mut round_best = best;
        round_best.g2 = T::infinity();
        for di in 0..ticks {
            let f = re::<T>(di as f64 / (ticks - 1) as f64) - re::<T>(0.5);
            let delta = center.0 + f * span.0;
            let p_solve = SystemParams {
                delta,
                ..*base
            };
            let l = build_liouvillian(space, &p_solve)?;
            let (rho, _) = steady_state(&l)?;
            for pi_idx in 0..ticks {
                let g = re::<T>(pi_idx as f64 / (ticks - 1) as f64) - re::<T>(0.5);
                let phi = center.1 + g * span.1;
                let p_obs = SystemParams { phi, ..p_solve };
                let field = output_operator(space, &p_obs, Port::Main)?;
                let g2 = g2_zero(&rho, &field)?;
                if g2 < round_best.g2 {
                    round_best = RefinedOptimum { delta, phi, g2 };
                }
            }
        }
        best = round_best;
        center = (best.delta, best.phi);
        let shrink = re::<T>(0.25);
        span = (span.0 * shrink, span.1 * shrink);
    }
    Ok(best)
}
