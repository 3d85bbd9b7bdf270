//! Dense complex matrices and the spectral kernels everything else is built on.

mod eigen;
mod lu;
mod matrix;
mod psd;
mod svd;

pub use eigen::{check_hermitian, herm_eig, herm_eigenvalues, SpectralData};
pub use lu::{det, inverse};
pub use matrix::{inner, vec_norm, ComplexMatrix, I, ONE, ZERO};
pub use psd::{is_psd, is_unitary, matrix_sqrt_psd, unitarity_error, PsdCheck};
pub use svd::{polar_right, singular_values, svd, PolarFactors, Svd};

pub(crate) use svd::complete_orthonormal;
