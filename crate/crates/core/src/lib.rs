//! Symmetric-norm inequalities for Hermitian 2x2 block matrices
//! `M = [[A, X], [X*, B]]`.
//!
//! The central question is when `||M|| <= ||A + B||` holds for every
//! unitarily invariant norm. The crate provides
//!
//! - [`numkernel`]: dense complex matrices, a Jacobi Hermitian eigensolver,
//!   SVD, polar decomposition, PSD tests and square roots, determinants;
//! - [`norms`]: Ky Fan profiles and the Fan-dominance comparator;
//! - [`blockdecomp`]: `Re`/`Im` parts, the half-part matrices and the
//!   constructive two-unitary decomposition of PSD block matrices;
//! - [`inequalities`]: the main check, the hypothesis classifier, congruence
//!   certificates for commuting blocks, the scalar-shift and factor-two bounds;
//! - [`counterexamples`]: closed-form violating families, the commuting-block
//!   determinant identity, fixed examples and a seeded violation search;
//! - [`sampling`]: seeded generators for all of the above.

pub mod blockdecomp;
pub mod counterexamples;
pub mod error;
pub mod inequalities;
pub mod norms;
pub mod numkernel;
pub mod sampling;
pub mod tolerance;

pub use blockdecomp::{BlockMatrix, Part};
pub use error::{Error, Result};
pub use inequalities::Hypothesis;
pub use norms::KyFanProfile;
pub use numkernel::ComplexMatrix;

pub use num_complex::Complex64;
