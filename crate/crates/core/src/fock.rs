//! Truncated two-mode Fock space and the dense operator matrices on it.
//!
//! Basis ordering is fixed as `k = n1 * (n_max + 1) + n2`, i.e. mode 1 is the
//! slow index, so `a1 = a (x) 1` and `a2 = 1 (x) a` under [`linalg::kron`].

use crate::error::{Error, Result};
use crate::linalg::{self, dagger, matmul};
use crate::params::SystemParams;
use crate::scalar::{re, C, Real};
use ndarray::Array2;

/// Truncated two-mode Hilbert space with `0..=n_max` photons per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    n_max: usize,
    dim: usize,
}

impl FockSpace {
    /// Build the space; `n_max` must be at least 1.
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidArgument(format!(
                "n_max must be >= 1, got {n_max}"
            )));
        }
        Ok(Self {
            n_max,
            dim: (n_max + 1) * (n_max + 1),
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Total Hilbert-space dimension `(n_max + 1)^2`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Basis index of `|n1, n2>`.
    pub fn index(&self, n1: usize, n2: usize) -> usize {
        debug_assert!(n1 <= self.n_max && n2 <= self.n_max);
        n1 * (self.n_max + 1) + n2
    }

    /// Occupation pair `(n1, n2)` of basis index `k`.
    pub fn levels(&self, k: usize) -> (usize, usize) {
        debug_assert!(k < self.dim);
        (k / (self.n_max + 1), k % (self.n_max + 1))
    }
}

/// Cavity mode selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    /// Parse a 1-based mode index as used in configuration input.
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            other => Err(Error::InvalidArgument(format!(
                "mode must be 1 or 2, got {other}"
            ))),
        }
    }
}

/// Dense operator on a [`FockSpace`].
#[derive(Debug, Clone)]
pub struct Operator<T: Real> {
    space: FockSpace,
    mat: Array2<C<T>>,
}

impl<T: Real> Operator<T> {
    pub fn from_matrix(space: FockSpace, mat: Array2<C<T>>) -> Self {
        assert_eq!(mat.nrows(), space.dim());
        assert_eq!(mat.ncols(), space.dim());
        Self { space, mat }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &Array2<C<T>> {
        &self.mat
    }

    pub fn into_matrix(self) -> Array2<C<T>> {
        self.mat
    }

    pub fn dagger(&self) -> Self {
        Self {
            space: self.space,
            mat: dagger(&self.mat),
        }
    }

    pub fn dot(&self, other: &Self) -> Self {
        assert_eq!(self.space, other.space);
        Self {
            space: self.space,
            mat: matmul(&self.mat, &other.mat),
        }
    }

    pub fn scaled(&self, factor: C<T>) -> Self {
        Self {
            space: self.space,
            mat: self.mat.mapv(|z| z * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.space, other.space);
        Self {
            space: self.space,
            mat: &self.mat + &other.mat,
        }
    }

    /// Largest deviation from Hermiticity, `max |A - A^dag|`.
    pub fn hermiticity_error(&self) -> T {
        linalg::max_abs(&(&self.mat - &dagger(&self.mat)))
    }
}

fn ladder_single<T: Real>(n_max: usize) -> Array2<C<T>> {
    let m = n_max + 1;
    let mut a = Array2::zeros((m, m));
    for n in 1..=n_max {
        a[[n - 1, n]] = C::new(re::<T>(n as f64).sqrt(), T::zero());
    }
    a
}

/// Identity operator.
pub fn identity<T: Real>(space: FockSpace) -> Operator<T> {
    Operator::from_matrix(space, Array2::eye(space.dim()))
}

/// Annihilation operator of one mode: `<n-1| a |n> = sqrt(n)` on that mode.
pub fn annihilator<T: Real>(space: FockSpace, mode: Mode) -> Operator<T> {
    let a = ladder_single::<T>(space.n_max());
    let eye = Array2::<C<T>>::eye(space.n_max() + 1);
    let mat = match mode {
        Mode::One => linalg::kron(&a, &eye),
        Mode::Two => linalg::kron(&eye, &a),
    };
    Operator::from_matrix(space, mat)
}

/// Photon-number operator `a^dag a` of one mode.
pub fn number_operator<T: Real>(space: FockSpace, mode: Mode) -> Operator<T> {
    let a = annihilator(space, mode);
    a.dagger().dot(&a)
}

/// System Hamiltonian in the probe-rotating frame (units of kappa):
/// detuning terms on both modes, the Kerr term on mode 1, and the coherent
/// drive `i eps (a^dag - a)` on each mode.
pub fn build_hamiltonian<T: Real>(space: FockSpace, p: &SystemParams<T>) -> Result<Operator<T>> {
    p.validate()?;
    let zero = T::zero();
    let a1 = annihilator::<T>(space, Mode::One);
    let a2 = annihilator::<T>(space, Mode::Two);
    let ad1 = a1.dagger();
    let ad2 = a2.dagger();

    let n1 = ad1.dot(&a1);
    let n2 = ad2.dot(&a2);
    let kerr = ad1.dot(&ad1).dot(&a1).dot(&a1);

    let i_eps = C::new(zero, p.eps);
    let mut h = n1.scaled(C::new(p.delta1, zero)).matrix().clone();
    h = h + kerr.scaled(C::new(p.u, zero)).matrix();
    h = h + n2.scaled(C::new(p.delta2(), zero)).matrix();
    h = h + ad1.add(&a1.scaled(C::new(-T::one(), zero))).scaled(i_eps).matrix();
    h = h + ad2.add(&a2.scaled(C::new(-T::one(), zero))).scaled(i_eps).matrix();
    Ok(Operator::from_matrix(space, h))
}
