//! Lindblad generator, steady states, time propagation, and two-time
//! correlations via the quantum regression theorem.
//!
//! Density matrices are column-vectorized (`vec(rho)[j*d + i] = rho[i, j]`),
//! so `vec(A rho B) = (B^T kron A) vec(rho)`.

use crate::error::{Error, Result};
use crate::fock::{annihilator, build_hamiltonian, FockSpace, Mode, Operator};
use crate::linalg::{
    self, dagger, expm, inf_norm, kron_acc, matvec, max_abs, trace_of_product, unvectorize,
    vectorize, LuDecomp,
};
use crate::params::SystemParams;
use crate::scalar::{re, scaled_tol, C, Real};
use ndarray::{Array1, Array2};
use std::collections::HashMap;

/// Generator of the master equation acting on vectorized density matrices.
pub struct Liouvillian<T: Real> {
    space: FockSpace,
    mat: Array2<C<T>>,
}

impl<T: Real> Liouvillian<T> {
    pub fn space(&self) -> FockSpace {
        self.space
    }

    /// Dense matrix of shape `dim^2 x dim^2` (units of kappa).
    pub fn matrix(&self) -> &Array2<C<T>> {
        &self.mat
    }

    /// Wrap a raw superoperator matrix. Intended for diagnostics and tests;
    /// [`build_liouvillian`] is the production constructor.
    pub fn from_matrix(space: FockSpace, mat: Array2<C<T>>) -> Self {
        let d2 = space.dim() * space.dim();
        assert_eq!(mat.nrows(), d2);
        assert_eq!(mat.ncols(), d2);
        Self { space, mat }
    }

    /// Largest column sum of the vectorized-trace row applied to the
    /// generator; zero for an exactly trace-preserving map.
    pub fn trace_violation(&self) -> T {
        let d = self.space.dim();
        let mut worst = T::zero();
        for c in 0..d * d {
            let mut acc = C::new(T::zero(), T::zero());
            for i in 0..d {
                acc = acc + self.mat[[i * d + i, c]];
            }
            let a = acc.norm_sqr().sqrt();
            if a > worst {
                worst = a;
            }
        }
        worst
    }

    /// Apply the generator to a density-like matrix, returning `d rho / dt`.
    pub fn apply(&self, rho: &Array2<C<T>>) -> Array2<C<T>> {
        let v = vectorize(rho);
        let w = matvec(&self.mat, &v);
        unvectorize(w.view(), self.space.dim())
    }
}

/// Hermitian, unit-trace state on the truncated space.
#[derive(Debug, Clone)]
pub struct DensityMatrix<T: Real> {
    space: FockSpace,
    rho: Array2<C<T>>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn from_matrix(space: FockSpace, rho: Array2<C<T>>) -> Self {
        assert_eq!(rho.nrows(), space.dim());
        assert_eq!(rho.ncols(), space.dim());
        Self { space, rho }
    }

    /// Vacuum projector `|0,0><0,0|`.
    pub fn vacuum(space: FockSpace) -> Self {
        let mut rho = Array2::zeros((space.dim(), space.dim()));
        rho[[0, 0]] = C::new(T::one(), T::zero());
        Self { space, rho }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &Array2<C<T>> {
        &self.rho
    }

    pub fn trace(&self) -> C<T> {
        let mut acc = C::new(T::zero(), T::zero());
        for i in 0..self.space.dim() {
            acc = acc + self.rho[[i, i]];
        }
        acc
    }

    /// `Tr[op . rho]`.
    pub fn expectation(&self, op: &Operator<T>) -> C<T> {
        trace_of_product(op.matrix(), &self.rho)
    }

    pub fn hermiticity_error(&self) -> T {
        max_abs(&(&self.rho - &dagger(&self.rho)))
    }

    pub fn min_eigenvalue(&self) -> T {
        linalg::hermitian_min_eigenvalue(&self.rho)
    }

    /// Total population on levels with `n1 = n_max` or `n2 = n_max`;
    /// a truncation-adequacy measure.
    pub fn boundary_population(&self) -> T {
        let n_max = self.space.n_max();
        let mut acc = T::zero();
        for k in 0..self.space.dim() {
            let (n1, n2) = self.space.levels(k);
            if n1 == n_max || n2 == n_max {
                acc = acc + self.rho[[k, k]].re;
            }
        }
        acc
    }
}

/// Numerical quality record of one steady-state solve (always in f64).
#[derive(Debug, Clone, Copy)]
pub struct SteadyDiagnostics {
    /// `max |L vec(rho)|` under the unmodified generator.
    pub residual: f64,
    /// `|Tr rho - 1|`.
    pub trace_error: f64,
    /// `max |rho - rho^dag|`.
    pub herm_error: f64,
    /// Smallest eigenvalue of rho.
    pub min_eigenvalue: f64,
    /// Population at the truncation boundary.
    pub boundary_population: f64,
}

/// Build the Lindblad generator for the driven two-cavity system:
/// `-i[H, rho] + sum_i kappa_i (2 a_i rho a_i^dag - a_i^dag a_i rho - rho a_i^dag a_i)`.
pub fn build_liouvillian<T: Real>(space: FockSpace, p: &SystemParams<T>) -> Result<Liouvillian<T>> {
    let h = build_hamiltonian(space, p)?;
    let d = space.dim();
    let eye = Array2::<C<T>>::eye(d);
    let i_unit = C::new(T::zero(), T::one());
    let mut l = Array2::zeros((d * d, d * d));

    // -i (1 (x) H - H^T (x) 1)
    kron_acc(&mut l, -i_unit, eye.view(), h.matrix().view());
    kron_acc(&mut l, i_unit, h.matrix().t(), eye.view());

    for (mode, kappa) in [(Mode::One, p.kappa1), (Mode::Two, p.kappa2)] {
        let a = annihilator::<T>(space, mode);
        let ad = a.dagger();
        let ada = ad.dot(&a);
        let two_k = C::new(kappa + kappa, T::zero());
        let neg_k = C::new(-kappa, T::zero());

        // 2 kappa (a^dag)^T (x) a - kappa (1 (x) a^dag a + (a^dag a)^T (x) 1)
        kron_acc(&mut l, two_k, ad.matrix().t(), a.matrix().view());
        kron_acc(&mut l, neg_k, eye.view(), ada.matrix().view());
        kron_acc(&mut l, neg_k, ada.matrix().t(), eye.view());
    }
    Ok(Liouvillian { space, mat: l })
}

/// Solve for the steady state: one row of the generator is replaced by the
/// vectorized trace constraint and the resulting system `L' x = e` is solved
/// by dense LU.
pub fn steady_state<T: Real>(l: &Liouvillian<T>) -> Result<(DensityMatrix<T>, SteadyDiagnostics)> {
    let d = l.space.dim();
    let d2 = d * d;
    let mut lp = l.mat.clone();
    for c in 0..d2 {
        lp[[0, c]] = C::new(T::zero(), T::zero());
    }
    for i in 0..d {
        lp[[0, i * d + i]] = C::new(T::one(), T::zero());
    }
    let mut rhs = Array1::zeros(d2);
    rhs[0] = C::new(T::one(), T::zero());

    let lu = LuDecomp::factor(lp).map_err(|e| Error::SolverFailure {
        reason: format!("trace-constrained system is singular ({e}); steady manifold may be degenerate"),
        residual: f64::NAN,
        trace_error: f64::NAN,
    })?;
    let x = lu.solve_vec(&rhs);

    let residual_vec = matvec(&l.mat, &x);
    let residual = inf_norm(&residual_vec).to_f64().unwrap_or(f64::NAN);

    let rho = DensityMatrix::from_matrix(l.space, unvectorize(x.view(), d));
    let trace_error = (rho.trace() - C::new(T::one(), T::zero()))
        .norm_sqr()
        .sqrt()
        .to_f64()
        .unwrap_or(f64::NAN);
    let herm_error = rho.hermiticity_error().to_f64().unwrap_or(f64::NAN);
    let min_eigenvalue = rho.min_eigenvalue().to_f64().unwrap_or(f64::NAN);
    let boundary_population = rho.boundary_population().to_f64().unwrap_or(f64::NAN);

    let diag = SteadyDiagnostics {
        residual,
        trace_error,
        herm_error,
        min_eigenvalue,
        boundary_population,
    };

    let tol = scaled_tol::<T>(1e-10).to_f64().unwrap();
    if !residual.is_finite() || residual > tol || !trace_error.is_finite() || trace_error > tol {
        return Err(Error::SolverFailure {
            reason: "steady-state residual or trace error out of tolerance".into(),
            residual,
            trace_error,
        });
    }
    Ok((rho, diag))
}

/// Apply `exp(L t)` to a (not necessarily unit-trace) operator.
///
/// Builds one dense propagator per call; for a grid of delays use
/// [`Propagator`] or [`g2_tau`], which reuse the exponential.
pub fn propagate<T: Real>(
    l: &Liouvillian<T>,
    op: &Array2<C<T>>,
    t: T,
) -> Result<Array2<C<T>>> {
    if !(t >= T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "propagation time must be >= 0, got {t}"
        )));
    }
    if t == T::zero() {
        return Ok(op.clone());
    }
    let p = Propagator::new(l, t)?;
    Ok(p.apply_matrix(op))
}

/// Dense propagator `exp(L dt)`, reusable across a delay grid.
pub struct Propagator<T: Real> {
    space: FockSpace,
    mat: Array2<C<T>>,
}

impl<T: Real> Propagator<T> {
    pub fn new(l: &Liouvillian<T>, dt: T) -> Result<Self> {
        let scaled = l.mat.mapv(|z| z * C::new(dt, T::zero()));
        let mat = expm(&scaled)?;
        Ok(Self {
            space: l.space,
            mat,
        })
    }

    pub fn apply_vec(&self, v: &Array1<C<T>>) -> Array1<C<T>> {
        matvec(&self.mat, v)
    }

    pub fn apply_matrix(&self, op: &Array2<C<T>>) -> Array2<C<T>> {
        let v = vectorize(op);
        unvectorize(self.apply_vec(&v).view(), self.space.dim())
    }
}

/// Normalized delayed second-order correlation on a grid of delays.
#[derive(Debug, Clone)]
pub struct CorrelationSeries<T: Real> {
    pub taus: Vec<T>,
    pub values: Vec<T>,
}

/// `g2(tau) = Tr[A^dag A e^{L tau}(A rho A^dag)] / Tr[A^dag A rho]^2`
/// evaluated by stepping one cached propagator along the delay grid.
///
/// `taus` must start at zero and increase strictly; `rho` must be the steady
/// state of `l` for the regression step to be meaningful.
pub fn g2_tau<T: Real>(
    l: &Liouvillian<T>,
    rho: &DensityMatrix<T>,
    field: &Operator<T>,
    taus: &[T],
) -> Result<CorrelationSeries<T>> {
    if taus.is_empty() || taus[0] != T::zero() {
        return Err(Error::InvalidArgument(
            "delay grid must be non-empty and start at 0".into(),
        ));
    }
    if taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "delay grid must be strictly increasing".into(),
        ));
    }

    let a = field.matrix();
    let ad = dagger(a);
    let ada = linalg::matmul(&ad, a);
    let n_out = trace_of_product(&ada, rho.matrix()).re;
    if n_out < scaled_tol::<T>(1e-14) {
        return Err(Error::UndefinedCorrelation);
    }
    let norm = n_out * n_out;

    // Tr[M X] as a bilinear form on vec(X): weights are vec(M^T).
    let weights = vectorize(&ada.t().to_owned());
    let conditional = linalg::matmul(&linalg::matmul(a, rho.matrix()), &ad);
    let mut v = vectorize(&conditional);

    let mut values = Vec::with_capacity(taus.len());
    let mut props: HashMap<u64, Propagator<T>> = HashMap::new();
    for (k, &tau) in taus.iter().enumerate() {
        if k > 0 {
            let dt = tau - taus[k - 1];
            let key = dt.to_f64().unwrap().to_bits();
            if !props.contains_key(&key) {
                props.insert(key, Propagator::new(l, dt)?);
            }
            v = props[&key].apply_vec(&v);
        }
        let mut acc = C::new(T::zero(), T::zero());
        for (w, x) in weights.iter().zip(v.iter()) {
            acc = acc + *w * *x;
        }
        values.push(acc.re / norm);
    }
    Ok(CorrelationSeries {
        taus: taus.to_vec(),
        values,
    })
}

/// Uniform delay grid of `count` points on `[0, tau_max]`.
pub fn uniform_taus<T: Real>(tau_max: T, count: usize) -> Vec<T> {
    assert!(count >= 2);
    let step = tau_max / re::<T>((count - 1) as f64);
    (0..count).map(|k| step * re::<T>(k as f64)).collect()
}
