use super::eigen::herm_eig;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance;

/// Outcome of a semi-definiteness test; `min_eigenvalue` is the witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub spectral_norm: f64,
}

/// `lambda_min(H) >= -tol * max(1, ||H||_s)`.
pub fn is_psd(h: &ComplexMatrix, tol: f64) -> Result<PsdCheck> {
    let eig = herm_eig(h)?;
    let min_eigenvalue = eig.min_eigenvalue();
    let spectral_norm = eig.max_eigenvalue().abs().max(min_eigenvalue.abs());
    Ok(PsdCheck {
        psd: min_eigenvalue >= -tol * tolerance::scale(spectral_norm),
        min_eigenvalue,
        spectral_norm,
    })
}

/// Principal square root of a PSD matrix. Eigenvalues within the PSD tolerance
/// below zero are clamped to zero.
pub fn matrix_sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(h)?;
    let min = eig.min_eigenvalue();
    let norm = eig.max_eigenvalue().abs().max(min.abs());
    if min < -tolerance::DEFAULT * tolerance::scale(norm) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.apply(|l| l.max(0.0).sqrt()))
}

/// `||U*U - I||_F <= tol`; false for non-square input.
pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    unitarity_error(u).is_some_and(|e| e <= tol)
}

/// `||U*U - I||_F`, or `None` when `u` is not square.
pub fn unitarity_error(u: &ComplexMatrix) -> Option<f64> {
    u.is_square()
        .then(|| (&u.adjoint() * u).distance(&ComplexMatrix::identity(u.rows())))
}
