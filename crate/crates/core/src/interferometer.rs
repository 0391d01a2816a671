//! Mixed output field of the interferometer and its photon statistics.
//!
//! The main-port output operator is `A = (sqrt(k1) a1 + e^{i phi} sqrt(k2) a2) / sqrt(2)`;
//! the complement port is the same with `phi -> phi + pi`. Production
//! observables use direct operator algebra on `A`; the mode-resolved moment
//! expansions (three-term intensity, sixteen-term correlation with the
//! `e^{i n phi}` phase factors) are kept as independent cross-check paths.

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::fock::{annihilator, FockSpace, Mode, Operator};
use crate::linalg::{dagger, matmul, trace_of_product};
use crate::params::SystemParams;
use crate::scalar::{scaled_tol, C, Real};

/// Which mixing-port output to observe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    Main,
    Complement,
}

/// Output-field operator of one interferometer port.
#[derive(Debug, Clone)]
pub struct OutputField<T: Real> {
    op: Operator<T>,
    port: Port,
}

impl<T: Real> OutputField<T> {
    pub fn operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn port(&self) -> Port {
        self.port
    }
}

/// Build the output-field operator for the requested port.
pub fn output_operator<T: Real>(
    space: FockSpace,
    p: &SystemParams<T>,
    port: Port,
) -> Result<OutputField<T>> {
    p.validate()?;
    let phi = match port {
        Port::Main => p.phi,
        Port::Complement => p.phi + T::PI(),
    };
    let inv_sqrt2 = T::one() / (T::one() + T::one()).sqrt();
    let w1 = C::new(p.kappa1.sqrt() * inv_sqrt2, T::zero());
    let w2 = C::from_polar(p.kappa2.sqrt() * inv_sqrt2, phi);
    let a1 = annihilator::<T>(space, Mode::One);
    let a2 = annihilator::<T>(space, Mode::Two);
    let op = a1.scaled(w1).add(&a2.scaled(w2));
    Ok(OutputField { op, port })
}

/// Output photon intensity `N_out = Tr[A^dag A rho]` (units of kappa).
pub fn output_intensity<T: Real>(rho: &DensityMatrix<T>, field: &OutputField<T>) -> T {
    let a = field.op.matrix();
    let ada = matmul(&dagger(a), a);
    trace_of_product(&ada, rho.matrix()).re
}

/// Zero-delay second-order correlation
/// `g2(0) = Tr[A^dag A^dag A A rho] / N_out^2`.
pub fn g2_zero<T: Real>(rho: &DensityMatrix<T>, field: &OutputField<T>) -> Result<T> {
    let a = field.op.matrix();
    let ad = dagger(a);
    let ada = matmul(&ad, a);
    let n_out = trace_of_product(&ada, rho.matrix()).re;
    if n_out < scaled_tol::<T>(1e-14) {
        return Err(Error::UndefinedCorrelation);
    }
    let aa = matmul(a, a);
    let numerator = trace_of_product(&matmul(&dagger(&aa), &aa), rho.matrix()).re;
    Ok(numerator / (n_out * n_out))
}

/// Intensity through the mode-resolved three-term expansion:
/// `2 N_out = k1 <a1^dag a1> + k2 <a2^dag a2> + 2 sqrt(k1 k2) Re(e^{i phi} <a1^dag a2>)`.
pub fn intensity_moment_sum<T: Real>(
    rho: &DensityMatrix<T>,
    p: &SystemParams<T>,
    port: Port,
) -> T {
    let space = rho.space();
    let phi = match port {
        Port::Main => p.phi,
        Port::Complement => p.phi + T::PI(),
    };
    let a1 = annihilator::<T>(space, Mode::One);
    let a2 = annihilator::<T>(space, Mode::Two);
    let n1 = trace_of_product(&matmul(&dagger(a1.matrix()), a1.matrix()), rho.matrix()).re;
    let n2 = trace_of_product(&matmul(&dagger(a2.matrix()), a2.matrix()), rho.matrix()).re;
    let cross = trace_of_product(&matmul(&dagger(a1.matrix()), a2.matrix()), rho.matrix());
    let phase = C::from_polar(T::one(), phi);
    let half = T::one() / (T::one() + T::one());
    half * (p.kappa1 * n1
        + p.kappa2 * n2
        + (T::one() + T::one()) * (p.kappa1 * p.kappa2).sqrt() * (phase * cross).re)
}

/// Zero-delay correlation through the sixteen-term mode expansion
/// `sum_{j,k,l,m} e^{i n phi} sqrt(k_j k_k k_l k_m) <a_j^dag a_k^dag a_l a_m> / (4 N_out^2)`
/// with `n = l + m - j - k` counting which indices ride the phased arm.
pub fn g2_zero_moment_sum<T: Real>(
    rho: &DensityMatrix<T>,
    p: &SystemParams<T>,
    port: Port,
) -> Result<T> {
    let space = rho.space();
    let phi = match port {
        Port::Main => p.phi,
        Port::Complement => p.phi + T::PI(),
    };
    let a = [
        annihilator::<T>(space, Mode::One).into_matrix(),
        annihilator::<T>(space, Mode::Two).into_matrix(),
    ];
    let ad = [dagger(&a[0]), dagger(&a[1])];
    let kappa = [p.kappa1, p.kappa2];

    let n_out = intensity_moment_sum(rho, p, port);
    if n_out < scaled_tol::<T>(1e-14) {
        return Err(Error::UndefinedCorrelation);
    }

    let mut acc = C::new(T::zero(), T::zero());
    for j in 0..2 {
        for k in 0..2 {
            for l in 0..2 {
                for m in 0..2 {
                    let op = matmul(&matmul(&ad[j], &ad[k]), &matmul(&a[l], &a[m]));
                    let moment = trace_of_product(&op, rho.matrix());
                    let n = (l + m) as i64 - (j + k) as i64;
                    let phase = C::from_polar(T::one(), phi * T::from_i64(n).unwrap());
                    let weight = (kappa[j] * kappa[k] * kappa[l] * kappa[m]).sqrt();
                    acc = acc + phase * moment * C::new(weight, T::zero());
                }
            }
        }
    }
    let four = T::from_f64(4.0).unwrap();
    Ok(acc.re / (four * n_out * n_out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_liouvillian, steady_state};
    use crate::linalg::max_abs;
    use crate::scalar::cx;
    use proptest::prelude::*;

    fn space(n: usize) -> FockSpace {
        FockSpace::new(n).unwrap()
    }

    #[test]
    fn balanced_zero_phase_mixes_symmetrically() {
        let s = space(2);
        let p = SystemParams::<f64> {
            phi: 0.0,
            ..Default::default()
        };
        let field = output_operator(s, &p, Port::Main).unwrap();
        let a1 = annihilator::<f64>(s, Mode::One);
        let a2 = annihilator::<f64>(s, Mode::Two);
        let expected = a1.add(&a2).scaled(cx(1.0 / 2f64.sqrt(), 0.0));
        let diff = field.operator().matrix() - expected.matrix();
        assert!(max_abs(&diff) < 1e-15);
    }

    #[test]
    fn pi_phase_equals_complement_at_zero() {
        let s = space(2);
        let at_pi = output_operator(
            s,
            &SystemParams::<f64> {
                phi: std::f64::consts::PI,
                ..Default::default()
            },
            Port::Main,
        )
        .unwrap();
        let complement = output_operator(
            s,
            &SystemParams::<f64> {
                phi: 0.0,
                ..Default::default()
            },
            Port::Complement,
        )
        .unwrap();
        let diff = at_pi.operator().matrix() - complement.operator().matrix();
        assert!(max_abs(&diff) < 1e-15);

        let a1 = annihilator::<f64>(s, Mode::One);
        let a2 = annihilator::<f64>(s, Mode::Two);
        let expected = a1.add(&a2.scaled(cx(-1.0, 0.0))).scaled(cx(1.0 / 2f64.sqrt(), 0.0));
        assert!(max_abs(&(at_pi.operator().matrix() - expected.matrix())) < 1e-15);
    }

    #[test]
    fn single_photon_action() {
        // A |1,0> = sqrt(kappa1 / 2) |0,0>
        let s = space(2);
        let p = SystemParams::<f64> {
            kappa1: 1.7,
            phi: 0.4,
            ..Default::default()
        };
        let field = output_operator(s, &p, Port::Main).unwrap();
        let col = s.index(1, 0);
        for row in 0..s.dim() {
            let expected = if row == s.index(0, 0) {
                cx((1.7f64 / 2.0).sqrt(), 0.0)
            } else {
                cx(0.0, 0.0)
            };
            assert!((field.operator().matrix()[[row, col]] - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn output_lowers_total_photon_number() {
        let s = space(3);
        let p = SystemParams::<f64>::default();
        let field = output_operator(s, &p, Port::Main).unwrap();
        for row in 0..s.dim() {
            for col in 0..s.dim() {
                let (r1, r2) = s.levels(row);
                let (c1, c2) = s.levels(col);
                if field.operator().matrix()[[row, col]].norm() > 0.0 {
                    assert_eq!(r1 + r2 + 1, c1 + c2);
                }
            }
        }
    }

    #[test]
    fn vacuum_has_zero_intensity() {
        let s = space(2);
        let p = SystemParams::<f64>::default();
        let field = output_operator(s, &p, Port::Main).unwrap();
        let vac = DensityMatrix::vacuum(s);
        assert_eq!(output_intensity(&vac, &field), 0.0);
        assert!(matches!(g2_zero(&vac, &field), Err(Error::UndefinedCorrelation)));
    }

    #[test]
    fn destructive_interference_cancels_equal_coherent_fields() {
        // identical linear cavities, phi = pi: the two coherent amplitudes cancel
        let s = space(5);
        let p = SystemParams::<f64> {
            delta1: 0.0,
            delta: 0.0,
            u: 0.0,
            eps: 0.1,
            phi: std::f64::consts::PI,
            ..Default::default()
        };
        let l = build_liouvillian(s, &p).unwrap();
        let (rho, _) = steady_state(&l).unwrap();
        let field = output_operator(s, &p, Port::Main).unwrap();
        assert!(output_intensity(&rho, &field).abs() < 1e-10);
    }

    #[test]
    fn intensity_matches_moment_expansion() {
        let s = space(3);
        let p = SystemParams::<f64> {
            delta: -0.6,
            u: 0.03,
            eps: 0.1,
            kappa2: 1.4,
            phi: 1.9,
            ..Default::default()
        };
        let l = build_liouvillian(s, &p).unwrap();
        let (rho, _) = steady_state(&l).unwrap();
        let field = output_operator(s, &p, Port::Main).unwrap();
        let direct = output_intensity(&rho, &field);
        let expanded = intensity_moment_sum(&rho, &p, Port::Main);
        assert!((direct - expanded).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn correlation_paths_and_ports_agree(
            delta in -1.0f64..1.0,
            u in 0.0f64..0.1,
            phi in 0.0f64..6.28,
            kappa2 in 0.5f64..1.5,
        ) {
            let s = space(2);
            let p = SystemParams { delta1: 0.0, delta, u, eps: 0.1, kappa1: 1.0, kappa2, phi };
            let l = build_liouvillian(s, &p).unwrap();
            let (rho, _) = steady_state(&l).unwrap();
            let field = output_operator(s, &p, Port::Main).unwrap();
            let direct = g2_zero(&rho, &field).unwrap();
            let expanded = g2_zero_moment_sum(&rho, &p, Port::Main).unwrap();
            prop_assert!(direct >= -1e-12);
            prop_assert!((direct - expanded).abs() <= 1e-10 * direct.abs().max(1.0));

            // complement port at phi equals main port at phi + pi
            let shifted = SystemParams { phi: phi + std::f64::consts::PI, ..p };
            let main_shifted = output_operator(s, &shifted, Port::Main).unwrap();
            let compl = output_operator(s, &p, Port::Complement).unwrap();
            let n_a = output_intensity(&rho, &main_shifted);
            let n_b = output_intensity(&rho, &compl);
            prop_assert!((n_a - n_b).abs() < 1e-14);
            if n_a > 1e-13 {
                let g_a = g2_zero(&rho, &main_shifted).unwrap();
                let g_b = g2_zero(&rho, &compl).unwrap();
                prop_assert!((g_a - g_b).abs() < 1e-10 * g_a.abs().max(1.0));
            }
        }
    }
}
