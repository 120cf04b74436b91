//! Spin, projector and single-transition operators in the product basis.
//!
//! All spin operators use the spin-1/2 normalisation `I = sigma / 2`, so that
//! `E± = (1 ± 2 I_z) / 2` are projectors.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, ComplexField, DMatrix};

use super::basis::{dim_of, Axis, LevelIndex};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Operator on the `2^n` dimensional space of `n` spins.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T: Real> {
    n_spins: usize,
    mat: CMatrix<T>,
}

/// Sign of a single-spin projector: `Plus` projects on |0>, `Minus` on |1>.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// One selective pulse: rotation by `angle` (radians) about `axis` on a transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pulse<T> {
    pub from: LevelIndex,
    pub to: LevelIndex,
    pub axis: Axis,
    pub angle: T,
}

impl<T: Real> Pulse<T> {
    pub fn x(from: LevelIndex, to: LevelIndex, angle: T) -> Self {
        Self {
            from,
            to,
            axis: Axis::X,
            angle,
        }
    }
}

pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

impl<T: Real> Operator<T> {
    pub fn zeros(n_spins: usize) -> Result<Self> {
        let d = dim_of(n_spins)?;
        Ok(Self {
            n_spins,
            mat: CMatrix::zeros(d, d),
        })
    }

    pub fn identity(n_spins: usize) -> Result<Self> {
        let d = dim_of(n_spins)?;
        Ok(Self {
            n_spins,
            mat: CMatrix::identity(d, d),
        })
    }

    pub fn from_matrix(n_spins: usize, mat: CMatrix<T>) -> Result<Self> {
        let d = dim_of(n_spins)?;
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::Input(format!(
                "matrix is {}x{}, expected {d}x{d}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { n_spins, mat })
    }

    /// Diagonal operator from its diagonal entries (length must be a power of two).
    pub fn from_diagonal(diag: &[Complex<T>]) -> Result<Self> {
        let n = diag.len().trailing_zeros() as usize;
        if !diag.len().is_power_of_two() || n == 0 {
            return Err(Error::Input(format!(
                "diagonal length {} is not 2^n",
                diag.len()
            )));
        }
        let mut mat = CMatrix::zeros(diag.len(), diag.len());
        for (i, v) in diag.iter().enumerate() {
            mat[(i, i)] = *v;
        }
        Self::from_matrix(n, mat)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.mat
    }

    /// Entry at 1-based levels `(row, col)`.
    pub fn entry(&self, row: LevelIndex, col: LevelIndex) -> Complex<T> {
        self.mat[(row.zero_based(), col.zero_based())]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_spins: self.n_spins,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            n_spins: self.n_spins,
            mat: self.mat.map(|z| z * s),
        }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self {
            n_spins: self.n_spins,
            mat: &self.mat * s,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> T {
        max_abs_diff(&self.mat, &self.mat.adjoint())
    }

    /// Largest elementwise deviation of `U U^dagger` from the identity.
    pub fn unitarity_error(&self) -> T {
        let d = self.dim();
        max_abs_diff(&(&self.mat * self.mat.adjoint()), &CMatrix::identity(d, d))
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.mat)
    }

    pub fn trace(&self) -> Complex<T> {
        self.mat.trace()
    }

    /// Largest elementwise difference between two operators.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        max_abs_diff(&self.mat, &other.mat)
    }
}

pub(crate) fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

pub(crate) fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).modulus()))
}

impl<'a, T: Real> Mul<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: &'a Operator<T>) -> Operator<T> {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            n_spins: self.n_spins,
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl<'a, T: Real> Add<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: &'a Operator<T>) -> Operator<T> {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            n_spins: self.n_spins,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl<'a, T: Real> Sub<&'a Operator<T>> for &'a Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: &'a Operator<T>) -> Operator<T> {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            n_spins: self.n_spins,
            mat: &self.mat - &rhs.mat,
        }
    }
}

fn check_spin(i: usize, n: usize) -> Result<()> {
    dim_of(n)?;
    if i == 0 || i > n {
        return Err(Error::Input(format!("spin index {i} out of range 1..={n}")));
    }
    Ok(())
}

/// Bit mask of spin `i` (1-based, spin 1 = msb) in a zero-based level index.
pub(crate) fn spin_mask(i: usize, n: usize) -> usize {
    1 << (n - i)
}

/// `I_axis` of spin `i`: `sigma_axis / 2` at Kronecker slot `i`, identities elsewhere.
pub fn spin_op<T: Real>(i: usize, axis: Axis, n: usize) -> Result<Operator<T>> {
    check_spin(i, n)?;
    let mut op = Operator::zeros(n)?;
    let mask = spin_mask(i, n);
    let half = T::lit(0.5);
    for col in 0..op.dim() {
        let up = col & mask == 0;
        match axis {
            Axis::X => op.mat[(col ^ mask, col)] = c(half, T::zero()),
            // sigma_y = [[0, -i], [i, 0]]
            Axis::Y => {
                let im = if up { half } else { -half };
                op.mat[(col ^ mask, col)] = c(T::zero(), im);
            }
            Axis::Z => {
                let re = if up { half } else { -half };
                op.mat[(col, col)] = c(re, T::zero());
            }
        }
    }
    Ok(op)
}

/// `E±` of spin `i`: projector onto |0> (`Plus`) or |1> (`Minus`) of that spin.
pub fn projector<T: Real>(i: usize, sign: Sign, n: usize) -> Result<Operator<T>> {
    check_spin(i, n)?;
    let mut op = Operator::zeros(n)?;
    let mask = spin_mask(i, n);
    for s in 0..op.dim() {
        let up = s & mask == 0;
        if up == (sign == Sign::Plus) {
            op.mat[(s, s)] = c(T::one(), T::zero());
        }
    }
    Ok(op)
}

/// Cartesian single-transition operator `I_axis^(m,k)`: `sigma_axis / 2` restricted to
/// the two-level subspace `{m, k}`, with `m` playing the role of |0>.
pub fn transition_op<T: Real>(
    m: LevelIndex,
    k: LevelIndex,
    axis: Axis,
    n: usize,
) -> Result<Operator<T>> {
    let d = dim_of(n)?;
    if m.value() > d || k.value() > d {
        return Err(Error::Input(format!(
            "transition ({m},{k}) out of range for {n} spins"
        )));
    }
    if m == k {
        return Err(Error::Input(format!("degenerate transition ({m},{k})")));
    }
    let mut op = Operator::zeros(n)?;
    let (r, s) = (m.zero_based(), k.zero_based());
    let half = T::lit(0.5);
    match axis {
        Axis::X => {
            op.mat[(r, s)] = c(half, T::zero());
            op.mat[(s, r)] = c(half, T::zero());
        }
        Axis::Y => {
            op.mat[(r, s)] = c(T::zero(), -half);
            op.mat[(s, r)] = c(T::zero(), half);
        }
        Axis::Z => {
            op.mat[(r, r)] = c(half, T::zero());
            op.mat[(s, s)] = c(-half, T::zero());
        }
    }
    Ok(op)
}

/// Hermitian exponent `sum_k angle_k * I_axis^(m_k, n_k)` of a block of simultaneous pulses.
pub fn generator<T: Real>(pulses: &[Pulse<T>], n: usize) -> Result<Operator<T>> {
    let mut acc = Operator::zeros(n)?;
    for p in pulses {
        let term = transition_op(p.from, p.to, p.axis, n)?;
        acc.mat += term.mat * c(p.angle, T::zero());
    }
    Ok(acc)
}

/// Rotation generator `angle * sum_{i in spins} I_axis^(i)` for a hard pulse.
pub fn hard_generator<T: Real>(
    spins: &[usize],
    axis: Axis,
    angle: T,
    n: usize,
) -> Result<Operator<T>> {
    let mut acc = Operator::zeros(n)?;
    for &i in spins {
        let term = spin_op::<T>(i, axis, n)?;
        acc.mat += term.mat * c(angle, T::zero());
    }
    Ok(acc)
}
