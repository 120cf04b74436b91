//! `exp(-iH)` for Hermitian generators through the eigendecomposition of `H`.

use nalgebra::SymmetricEigen;

use super::operator::{c, CMatrix, Operator};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unitary `exp(-iH)` of a Hermitian operator, `V diag(e^{-i lambda}) V^dagger`.
pub fn expm_unitary<T: Real>(h: &Operator<T>) -> Result<Operator<T>> {
    let herr = h.hermiticity_error();
    if herr > T::lit(T::CONTRACT_TOL) {
        return Err(Error::Contract(format!(
            "generator is not Hermitian (max deviation {herr})"
        )));
    }
    // Symmetrise so the eigensolver sees an exactly Hermitian input.
    let sym = (h.matrix() + h.matrix().adjoint()) * c(T::lit(0.5), T::zero());
    let eig = SymmetricEigen::new(sym);
    let d = h.dim();
    let mut phased = eig.eigenvectors.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = c(lambda.cos(), -lambda.sin());
        for i in 0..d {
            phased[(i, j)] *= phase;
        }
    }
    let u: CMatrix<T> = phased * eig.eigenvectors.adjoint();
    Operator::from_matrix(h.n_spins(), u)
}

/// Real eigenvalues of a Hermitian operator in ascending order.
pub fn hermitian_eigenvalues<T: Real>(h: &Operator<T>) -> Result<Vec<T>> {
    let herr = h.hermiticity_error();
    if herr > T::lit(T::CONTRACT_TOL) {
        return Err(Error::Contract(format!(
            "operator is not Hermitian (max deviation {herr})"
        )));
    }
    let sym = (h.matrix() + h.matrix().adjoint()) * c(T::lit(0.5), T::zero());
    let mut ev: Vec<T> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(ev)
}
