//! Numerical thresholds shared by the kernels and the checkers.

/// Relative Hermiticity slack: `||H - H*||_F <= HERMITICITY * max(1, ||H||_F)`.
pub const HERMITICITY: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius mass drops below this fraction of `||H||_F`.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;

/// Hard cap on cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 60;

/// Singular values below this fraction of `sigma_max` get their left vectors
/// from orthonormal completion instead of `X v / sigma`.
pub const SVD_SMALL_SINGULAR: f64 = 1e-12;

/// Library-wide default relative tolerance for verdicts.
pub const DEFAULT: f64 = 1e-8;

/// `lambda_min > STRICT_PD * ||A+B||_s` counts as positive definite.
pub const STRICT_PD: f64 = 1e-8;

/// `max(1, x)`, the scale floor used by every relative tolerance here.
pub fn scale(x: f64) -> f64 {
    x.max(1.0)
}
