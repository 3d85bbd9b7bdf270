//! Checkers for `||M|| <= ||A + B||` over all symmetric norms and the
//! sufficient conditions under which it holds for PSD `M`.
//!
//! Every "for all symmetric norms" verdict is a Ky Fan dominance test between
//! `M` (size `2n`) and `(A + B) ⊕ 0`.

use std::fmt;

use crate::blockdecomp::{half_parts, BlockMatrix, Part};
use crate::error::{Error, Result};
use crate::norms::{dominance, ky_fan_profile, KyFanProfile};
use crate::numkernel::{herm_eig, is_psd, polar_right, ComplexMatrix, PolarFactors};
use crate::tolerance;

/// Which sufficient condition, if any, guarantees the inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hypothesis {
    HermitianX,
    SkewHermitianX,
    ScalarShiftIm { r: f64 },
    ScalarShiftRe { r: f64 },
    CommutingBlocks,
    None,
}

impl Hypothesis {
    pub fn tag(&self) -> &'static str {
        match self {
            Hypothesis::HermitianX => "HermitianX",
            Hypothesis::SkewHermitianX => "SkewHermitianX",
            Hypothesis::ScalarShiftIm { .. } => "ScalarShiftIm",
            Hypothesis::ScalarShiftRe { .. } => "ScalarShiftRe",
            Hypothesis::CommutingBlocks => "CommutingBlocks",
            Hypothesis::None => "None",
        }
    }

    /// The shift `r` for the scalar-shift classes.
    pub fn shift(&self) -> Option<f64> {
        match self {
            Hypothesis::ScalarShiftIm { r } | Hypothesis::ScalarShiftRe { r } => Some(*r),
            _ => None,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Hypothesis::None)
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shift() {
            Some(r) => write!(f, "{}(r = {r})", self.tag()),
            None => f.write_str(self.tag()),
        }
    }
}

/// Verdict of `||M||_k <= ||(A+B) ⊕ 0||_k` for every `k = 1..2n`.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub holds: bool,
    /// `margins[k-1] = ||(A+B) ⊕ 0||_k - ||M||_k`.
    pub margins: Vec<f64>,
    pub first_violation: Option<usize>,
    pub hypothesis: Hypothesis,
    pub tol: f64,
    pub m_profile: KyFanProfile,
    pub a_plus_b_profile: KyFanProfile,
}

impl InequalityReport {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `||PQ - QP||_F <= tol * max(1, ||P||_F ||Q||_F)`.
pub fn commutes(p: &ComplexMatrix, q: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !p.is_square() || p.rows() != q.rows() || p.cols() != q.cols() {
        return Err(Error::DimensionMismatch(format!(
            "commutator of {}x{} and {}x{}",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let c = p.commutator(q)?.frobenius_norm();
    Ok(c <= tol * tolerance::scale(p.frobenius_norm() * q.frobenius_norm()))
}

/// `Some((part, r))` when `Im(X) = r I` (checked first) or `Re(X) = r I`
/// within `tol` in Frobenius norm, with `r = tr(part) / n`.
pub fn scalar_shift_check(x: &ComplexMatrix, tol: f64) -> Option<(Part, f64)> {
    let n = x.rows();
    [Part::Im, Part::Re].into_iter().find_map(|part| {
        let h = part.of(x);
        let r = h.trace().re / n as f64;
        let resid = h.shift((-r).into()).frobenius_norm();
        (resid <= tol).then_some((part, r))
    })
}

/// First matching hypothesis in the order HermitianX, SkewHermitianX,
/// ScalarShiftIm, ScalarShiftRe, CommutingBlocks.
///
/// The tests run on `M / ||M||_F`, so the tag does not depend on the scale of
/// `M`; a recovered shift `r` is reported in the original units.
pub fn classify(m: &BlockMatrix, tol: f64) -> Hypothesis {
    let scale = m.assemble().frobenius_norm();
    if scale == 0.0 {
        return Hypothesis::HermitianX;
    }
    let unit = m.scaled(1.0 / scale);
    let x = unit.x();
    let xh = x.adjoint();
    if x.distance(&xh) <= tol {
        return Hypothesis::HermitianX;
    }
    if (x + &xh).frobenius_norm() <= tol {
        return Hypothesis::SkewHermitianX;
    }
    if let Some((part, r)) = scalar_shift_check(x, tol) {
        let r = r * scale;
        return match part {
            Part::Im => Hypothesis::ScalarShiftIm { r },
            Part::Re => Hypothesis::ScalarShiftRe { r },
        };
    }
    let with_a = commutes(&xh, unit.a(), tol).unwrap_or(false);
    let with_b = commutes(x, unit.b(), tol).unwrap_or(false);
    if with_a || with_b {
        return Hypothesis::CommutingBlocks;
    }
    Hypothesis::None
}

/// Fan-dominance check of `M` against `(A + B) ⊕ 0`. `tol = None` uses
/// `1e-8 * max(1, ||A+B||_tr)`.
pub fn check_main_inequality(m: &BlockMatrix, tol: Option<f64>) -> Result<InequalityReport> {
    let size = 2 * m.n();
    let m_profile = ky_fan_profile(&m.assemble(), size)?;
    let ab_profile = ky_fan_profile(&m.a_plus_b(), size)?;
    let report = dominance(&m_profile, &ab_profile, tol);
    Ok(InequalityReport {
        holds: report.dominated,
        margins: report.margins,
        first_violation: report.first_violation,
        hypothesis: classify(m, tolerance::DEFAULT),
        tol: report.tol,
        m_profile,
        a_plus_b_profile: ab_profile,
    })
}

fn require_psd(m: &BlockMatrix) -> Result<f64> {
    let check = m.is_psd(tolerance::DEFAULT)?;
    if !check.psd {
        return Err(Error::NotPsd {
            min_eigenvalue: check.min_eigenvalue,
        });
    }
    Ok(check.min_eigenvalue)
}

/// Which diagonal block the congruence acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionSide {
    /// `X*` commutes with `A`; `W = U ⊕ I`.
    A,
    /// `X` commutes with `B`; `W = I ⊕ U`.
    B,
}

/// `W* M W = [[A, Y], [Y, B]]` with `Y` Hermitian PSD.
#[derive(Debug, Clone)]
pub struct ReductionCertificate {
    pub w: ComplexMatrix,
    pub reduced: BlockMatrix,
    pub side: ReductionSide,
    /// `||W* M W - reduced||_F`.
    pub congruence_error: f64,
}

// Eigenvalues of `h` closer than this (relative) are treated as one eigenspace.
const EIGEN_CLUSTER: f64 = 1e-6;

/// Polar factors of `x` whose unitary also commutes with the Hermitian `h`.
///
/// `x` commuting with `h` leaves each eigenspace of `h` invariant, so the polar
/// decomposition is taken block by block in an eigenbasis of `h`. This pins
/// the unitary down on the null space of a singular `x` in a way the plain
/// completion would not.
fn commuting_polar(x: &ComplexMatrix, h: &ComplexMatrix) -> Result<PolarFactors> {
    let eig = herm_eig(h)?;
    let q = &eig.eigenvectors;
    let n = x.rows();
    let local = &(&q.adjoint() * x) * q;
    let gap = EIGEN_CLUSTER
        * tolerance::scale(eig.max_eigenvalue().abs().max(eig.min_eigenvalue().abs()));

    let mut unitary = ComplexMatrix::zeros(n, n);
    let mut modulus = ComplexMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.eigenvalues[end - 1] - eig.eigenvalues[end] <= gap {
            end += 1;
        }
        let len = end - start;
        let polar = polar_right(&local.block(start, start, len, len))?;
        for i in 0..len {
            for j in 0..len {
                unitary[(start + i, start + j)] = polar.unitary[(i, j)];
                modulus[(start + i, start + j)] = polar.modulus[(i, j)];
            }
        }
        start = end;
    }
    let back = |m: &ComplexMatrix| &(q * m) * &q.adjoint();
    Ok(PolarFactors {
        unitary: back(&unitary),
        modulus: back(&modulus).hermitian_part(),
    })
}

/// Congruence to a block matrix with Hermitian off-diagonal block when `X*`
/// commutes with `A` (or `X` with `B`). `Ok(None)` when neither holds.
pub fn reduce_to_hermitian_block(m: &BlockMatrix) -> Result<Option<ReductionCertificate>> {
    require_psd(m)?;
    let n = m.n();
    let id = ComplexMatrix::identity(n);
    let (w, reduced_x, side) = if commutes(&m.x().adjoint(), m.a(), tolerance::DEFAULT)? {
        let polar = commuting_polar(m.x(), m.a())?;
        (
            polar.unitary.direct_sum(&id),
            polar.modulus,
            ReductionSide::A,
        )
    } else if commutes(m.x(), m.b(), tolerance::DEFAULT)? {
        let polar = commuting_polar(&m.x().adjoint(), m.b())?;
        (
            id.direct_sum(&polar.unitary),
            polar.modulus,
            ReductionSide::B,
        )
    } else {
        return Ok(None);
    };
    let reduced = BlockMatrix::new(m.a().clone(), reduced_x, m.b().clone())?;
    let congruent = &(&w.adjoint() * &m.assemble()) * &w;
    let congruence_error = congruent.distance(&reduced.assemble());
    Ok(Some(ReductionCertificate {
        w,
        reduced,
        side,
        congruence_error,
    }))
}

/// Per-k identity `||F1||_k + ||F2||_k = ||A+B||_k` for the half-parts `F1,
/// F2 = (A+B)/2 ± rI`, together with the main inequality.
#[derive(Debug, Clone)]
pub struct ScalarShiftReport {
    pub part: Part,
    pub r: f64,
    /// `|(||F1||_k + ||F2||_k) - ||A+B||_k|` for `k = 1..n`.
    pub residuals: Vec<f64>,
    pub equality_tol: f64,
    pub equality_holds: bool,
    pub inequality: InequalityReport,
}

impl ScalarShiftReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Scalar-shift Ky Fan identity check; requires PSD `M` with `Im(X)` or `Re(X)` a
/// multiple of the identity.
pub fn check_scalar_shift(m: &BlockMatrix) -> Result<ScalarShiftReport> {
    let check = m.is_psd(tolerance::DEFAULT)?;
    if !check.psd {
        return Err(Error::HypothesisNotMet(format!(
            "M is not PSD (minimum eigenvalue {:e})",
            check.min_eigenvalue
        )));
    }
    let shift_tol = tolerance::DEFAULT * tolerance::scale(m.assemble().frobenius_norm());
    let (part, r) = scalar_shift_check(m.x(), shift_tol).ok_or_else(|| {
        Error::HypothesisNotMet("neither Im(X) nor Re(X) is a multiple of the identity".into())
    })?;
    let n = m.n();
    let halves = half_parts(m);
    let (first, second) = halves.pair(part);
    let p1 = ky_fan_profile(first, n)?;
    let p2 = ky_fan_profile(second, n)?;
    let pab = ky_fan_profile(&m.a_plus_b(), n)?;
    let residuals: Vec<f64> = (0..n)
        .map(|k| (p1.cumsum()[k] + p2.cumsum()[k] - pab.cumsum()[k]).abs())
        .collect();
    let equality_tol = 1e-9 * pab.trace_norm();
    let equality_holds = residuals.iter().all(|&e| e <= equality_tol);
    Ok(ScalarShiftReport {
        part,
        r,
        residuals,
        equality_tol,
        equality_holds,
        inequality: check_main_inequality(m, None)?,
    })
}

/// `||M||_k <= 2 ||A+B||_k` for every `k`, with the strictness diagnostics.
#[derive(Debug, Clone)]
pub struct FactorTwoReport {
    pub holds: bool,
    /// `margins[k-1] = 2 ||(A+B) ⊕ 0||_k - ||M||_k`.
    pub margins: Vec<f64>,
    pub first_violation: Option<usize>,
    pub tol: f64,
    pub m1_min_eigenvalue: f64,
    pub m2_min_eigenvalue: f64,
    /// `M1` or `M2` is positive definite (`lambda_min > 1e-8 ||A+B||_s`).
    pub strict_expected: bool,
    /// Every margin is strictly positive.
    pub strict: bool,
}

impl FactorTwoReport {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn factor_two_bound(m: &BlockMatrix) -> Result<FactorTwoReport> {
    require_psd(m)?;
    let size = 2 * m.n();
    let ab = m.a_plus_b();
    let m_profile = ky_fan_profile(&m.assemble(), size)?;
    let twice = ky_fan_profile(&ab.scale_real(2.0), size)?;
    let report = dominance(&m_profile, &twice, None);

    let halves = half_parts(m);
    let m1_min = herm_eig(&halves.m1)?.min_eigenvalue();
    let m2_min = herm_eig(&halves.m2)?.min_eigenvalue();
    let ab_norm = ky_fan_profile(&ab, m.n())?.spectral();
    let threshold = tolerance::STRICT_PD * ab_norm;
    Ok(FactorTwoReport {
        holds: report.dominated,
        strict: report.strict(),
        margins: report.margins,
        first_violation: report.first_violation,
        tol: report.tol,
        m1_min_eigenvalue: m1_min,
        m2_min_eigenvalue: m2_min,
        strict_expected: m1_min > threshold || m2_min > threshold,
    })
}

/// PSD check of `M1, M2, N1, N2`; for positive definite `M` all four are
/// positive definite as well.
pub fn half_parts_min_eigenvalues(m: &BlockMatrix) -> Result<[f64; 4]> {
    let h = half_parts(m);
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip([&h.m1, &h.m2, &h.n1, &h.n2]) {
        *slot = is_psd(part, tolerance::DEFAULT)?.min_eigenvalue;
    }
    Ok(out)
}
