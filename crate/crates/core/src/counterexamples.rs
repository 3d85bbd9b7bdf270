//! Block matrices that break `||M|| <= ||A + B||`.
//!
//! The diagonal family `N = [[diag(a), D], [D*, diag(b)]]` with `a >= 0 > b`
//! and diagonal `D` splits into `n` independent 2x2 problems: by the
//! commuting-block determinant identity its eigenvalues are the roots of
//! `(a_i - mu)(b_i - mu) - d_i = 0` with `d_i = |D_ii|^2`. When
//! `a_i + b_i >= 0` and `a_i b_i - d_i < 0` each pair of roots straddles zero
//! with the positive root dominating, and `N` beats `(A+B) ⊕ 0` in every
//! Ky Fan norm.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::blockdecomp::BlockMatrix;
use crate::error::{Error, Result};
use crate::inequalities::{check_main_inequality, commutes, InequalityReport};
use crate::norms::{dominance, ky_fan_profile, DominanceReport};
use crate::numkernel::{det, is_psd, ComplexMatrix, PsdCheck, I, ZERO};
use crate::sampling::{trial_rng, wishart_block};
use crate::tolerance;

/// Diagonal data `(a, b, D)` of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    a: Vec<f64>,
    b: Vec<f64>,
    d: Vec<Complex64>,
}

impl FamilySpec {
    /// Shape and finiteness only; sign conditions are checked by the operations.
    pub fn new(a: Vec<f64>, b: Vec<f64>, d: Vec<Complex64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() || a.len() != d.len() {
            return Err(Error::DimensionMismatch(format!(
                "family vectors must be non-empty and equal length, got a={}, b={}, d={}",
                a.len(),
                b.len(),
                d.len()
            )));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) || d.iter().any(|z| !z.is_finite()) {
            return Err(Error::DimensionMismatch(
                "family entries must be finite".into(),
            ));
        }
        Ok(Self { a, b, d })
    }

    /// Real diagonal `D`.
    pub fn from_real(a: Vec<f64>, b: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        Self::new(
            a,
            b,
            d.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Diagonal of `D`.
    pub fn d(&self) -> &[Complex64] {
        &self.d
    }

    /// Diagonal of `D* D`.
    pub fn d_squared(&self) -> Vec<f64> {
        self.d.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `a_i >= 0` and `b_i < 0` for all `i`.
    pub fn check_signs(&self) -> Result<()> {
        for i in 0..self.n() {
            if self.a[i] < 0.0 {
                return Err(Error::SignViolation(format!(
                    "a[{i}] = {} is negative",
                    self.a[i]
                )));
            }
            if self.b[i] >= 0.0 {
                return Err(Error::SignViolation(format!(
                    "b[{i}] = {} is not negative",
                    self.b[i]
                )));
            }
        }
        Ok(())
    }

    /// `a_i + b_i >= 0` per index.
    pub fn sum_ok(&self) -> Vec<bool> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| a + b >= 0.0)
            .collect()
    }

    /// `a_i b_i - d_i < 0` per index, evaluated literally.
    pub fn prod_ok(&self) -> Vec<bool> {
        let d2 = self.d_squared();
        (0..self.n())
            .map(|i| self.a[i] * self.b[i] - d2[i] < 0.0)
            .collect()
    }

    /// Every flag holds at every index.
    pub fn is_valid(&self) -> bool {
        self.sum_ok().into_iter().chain(self.prod_ok()).all(|f| f)
    }
}

/// `N = [[diag(a), diag(D)], [diag(D)*, diag(b)]]`.
pub fn build_family(family: &FamilySpec) -> Result<BlockMatrix> {
    family.check_signs()?;
    BlockMatrix::new(
        ComplexMatrix::from_real_diagonal(family.a()),
        ComplexMatrix::from_diagonal(family.d()),
        ComplexMatrix::from_real_diagonal(family.b()),
    )
}

/// Root pairs `(x_i, y_i)`, `x_i >= y_i`, of `(a_i - mu)(b_i - mu) - d_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticRoots {
    pub pairs: Vec<(f64, f64)>,
}

impl QuadraticRoots {
    /// All `2n` roots, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
        all.sort_by(|a, b| b.total_cmp(a));
        all
    }
}

/// Real roots of `mu^2 - s mu + p` (discriminant assumed nonnegative), larger first.
fn real_quadratic_roots(s: f64, p: f64, disc: f64) -> (f64, f64) {
    let root = disc.max(0.0).sqrt();
    // avoid cancellation: take the root of larger magnitude first, then Vieta
    let q = 0.5 * (s + s.signum() * root);
    if q == 0.0 {
        return (0.0, 0.0);
    }
    let (r1, r2) = (q, p / q);
    if r1 >= r2 {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// Closed-form eigenvalues of the family, one pair per index.
pub fn quadratic_eigs(family: &FamilySpec) -> QuadraticRoots {
    let d2 = family.d_squared();
    let pairs = (0..family.n())
        .map(|i| {
            let (a, b) = (family.a[i], family.b[i]);
            let disc = (a - b) * (a - b) + 4.0 * d2[i];
            real_quadratic_roots(a + b, a * b - d2[i], disc)
        })
        .collect();
    QuadraticRoots { pairs }
}

/// Evidence that a valid family violates the inequality in every Ky Fan norm.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub roots: QuadraticRoots,
    pub n_psd: PsdCheck,
    pub neg_n_psd: PsdCheck,
    /// `N` against `(A+B) ⊕ 0`; margins are `||A+B||_k - ||N||_k`.
    pub dominance: DominanceReport,
    /// `||N||_k - ||(A+B) ⊕ 0||_k` for `k = 1..2n`.
    pub excess: Vec<f64>,
    /// Neither `N` nor `-N` is PSD and every excess is strictly positive.
    pub confirmed: bool,
}

/// Confirms the predicted violation; fails with `HypothesisNotMet` when a
/// validity flag is false.
pub fn verify_violation(family: &FamilySpec) -> Result<ViolationReport> {
    let n_block = build_family(family)?;
    let (sum_ok, prod_ok) = (family.sum_ok(), family.prod_ok());
    if let Some(i) = (0..family.n()).find(|&i| !(sum_ok[i] && prod_ok[i])) {
        return Err(Error::HypothesisNotMet(format!(
            "index {i}: a+b >= 0 is {}, a*b - d < 0 is {}",
            sum_ok[i], prod_ok[i]
        )));
    }
    let full = n_block.assemble();
    let size = 2 * family.n();
    let n_psd = is_psd(&full, tolerance::DEFAULT)?;
    let neg_n_psd = is_psd(&-&full, tolerance::DEFAULT)?;
    let report = dominance(
        &ky_fan_profile(&full, size)?,
        &ky_fan_profile(&n_block.a_plus_b(), size)?,
        None,
    );
    let excess: Vec<f64> = report.margins.iter().map(|m| -m).collect();
    let confirmed = !n_psd.psd && !neg_n_psd.psd && excess.iter().all(|&e| e > 0.0);
    Ok(ViolationReport {
        roots: quadratic_eigs(family),
        n_psd,
        neg_n_psd,
        dominance: report,
        excess,
        confirmed,
    })
}

/// `det(M) = det(AD - CB)` for `M = [[A, B], [C, D]]` with `AC = CA`.
pub fn det_commuting_blocks(m: &ComplexMatrix) -> Result<Complex64> {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "expected an even square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows() / 2;
    let a = m.block(0, 0, n, n);
    let b = m.block(0, n, n, n);
    let c = m.block(n, 0, n, n);
    let d = m.block(n, n, n, n);
    if !commutes(&a, &c, tolerance::DEFAULT)? {
        return Err(Error::BlocksDoNotCommute {
            commutator: a.commutator(&c)?.frobenius_norm(),
        });
    }
    det(&(&(&a * &d) - &(&c * &b)))
}

/// The 4x4 PSD matrix with `||T||_s = 6 > 5.3 = ||A+B||_s`.
pub fn fixed_example_t() -> BlockMatrix {
    BlockMatrix::new(
        ComplexMatrix::from_real_diagonal(&[3.0 / 10.0, 5.0]),
        ComplexMatrix::from_rows(&[&[ZERO, I / 11.0], &[I, ZERO]]),
        ComplexMatrix::from_real_diagonal(&[5.0, 3.0 / 10.0]),
    )
    .expect("fixed example is well formed")
}

/// `N_y` with eigenvalues `{4, 1, y, 0}`; PSD exactly when `y >= 0`.
pub fn fixed_example_ny(y: f64) -> BlockMatrix {
    BlockMatrix::new(
        ComplexMatrix::from_real_diagonal(&[2.0, y]),
        ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]),
        ComplexMatrix::from_real_diagonal(&[1.0, 2.0]),
    )
    .expect("fixed example is well formed")
}

/// A PSD block matrix that fails the main inequality.
#[derive(Debug, Clone)]
pub struct Violation {
    /// Trial index for sampled candidates, `None` for corpus entries.
    pub trial: Option<u64>,
    pub matrix: BlockMatrix,
    pub min_eigenvalue: f64,
    pub report: InequalityReport,
}

/// `Some` when `m` is PSD and fails the main inequality.
pub fn screen_candidate(m: BlockMatrix, trial: Option<u64>) -> Result<Option<Violation>> {
    let psd = m.is_psd(tolerance::DEFAULT)?;
    if !psd.psd {
        return Ok(None);
    }
    let report = check_main_inequality(&m, None)?;
    if report.holds {
        return Ok(None);
    }
    Ok(Some(Violation {
        trial,
        matrix: m,
        min_eigenvalue: psd.min_eigenvalue,
        report,
    }))
}

/// Screens explicit candidates, keeping input order.
pub fn screen_corpus(candidates: impl IntoIterator<Item = BlockMatrix>) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for m in candidates {
        if let Some(v) = screen_candidate(m, None)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Samples `trials` Wishart block matrices `G* G` of size `2n` and returns the
/// violators in trial order. Trial `t` draws from stream `t` of `seed`, so the
/// output does not depend on how the trials are scheduled.
pub fn search_psd_violations(n: usize, trials: u64, seed: u64) -> Result<Vec<Violation>> {
    if n == 0 {
        return Err(Error::DimensionMismatch(
            "block size must be positive".into(),
        ));
    }
    let hits: Vec<Option<Violation>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            screen_candidate(wishart_block(&mut rng, n), Some(t))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::herm_eigenvalues;

    fn worked() -> FamilySpec {
        FamilySpec::from_real(vec![1.0, 2.0], vec![-0.5, -1.0], vec![1.0, 2.0]).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn worked_family_spectrum() {
        let n = build_family(&worked()).unwrap();
        let ev = herm_eigenvalues(&n.assemble()).unwrap();
        assert!(close(&ev, &[3.0, 1.5, -1.0, -2.0], 1e-12), "{ev:?}");
        let roots = quadratic_eigs(&worked());
        assert!(close(&roots.eigenvalues(), &[3.0, 1.5, -1.0, -2.0], 1e-14));
        assert_eq!(roots.pairs, vec![(1.5, -1.0), (3.0, -2.0)]);
    }

    #[test]
    fn scalar_families() {
        let trivial = FamilySpec::from_real(vec![0.0], vec![-1.0], vec![0.0]).unwrap();
        let n = build_family(&trivial).unwrap();
        assert_eq!(
            n.assemble(),
            ComplexMatrix::from_real_diagonal(&[0.0, -1.0])
        );
        assert_eq!(quadratic_eigs(&trivial).pairs, vec![(0.0, -1.0)]);

        let family = FamilySpec::from_real(vec![2.0], vec![-1.0], vec![3.0]).unwrap();
        let (x, y) = quadratic_eigs(&family).pairs[0];
        assert!((x + y - 1.0).abs() < 1e-14);
        assert!((x * y + 11.0).abs() < 1e-13);
        let ev = herm_eigenvalues(&build_family(&family).unwrap().assemble()).unwrap();
        assert!(close(&ev, &[x, y], 1e-13));
    }

    #[test]
    fn sign_violations() {
        let bad_a = FamilySpec::from_real(vec![-1.0], vec![-1.0], vec![1.0]).unwrap();
        assert!(matches!(build_family(&bad_a), Err(Error::SignViolation(_))));
        let bad_b = FamilySpec::from_real(vec![1.0], vec![0.0], vec![1.0]).unwrap();
        assert!(matches!(build_family(&bad_b), Err(Error::SignViolation(_))));
        assert!(FamilySpec::from_real(vec![1.0], vec![], vec![1.0]).is_err());
    }

    #[test]
    fn violation_confirmed_for_worked_family() {
        let rep = verify_violation(&worked()).unwrap();
        assert!(rep.confirmed);
        assert!(close(
            rep.dominance.dominated_profile.cumsum(),
            &[3.0, 5.0, 6.5, 7.5],
            1e-12
        ));
        assert!(close(
            rep.dominance.dominating_profile.cumsum(),
            &[1.0, 1.5, 1.5, 1.5],
            1e-12
        ));
    }

    #[test]
    fn violation_scalar_family() {
        let family = FamilySpec::from_real(vec![5.0], vec![-1.0], vec![6.0_f64.sqrt()]).unwrap();
        let rep = verify_violation(&family).unwrap();
        assert!(rep.confirmed);
        let (x, y) = rep.roots.pairs[0];
        assert!((x - (2.0 + 15.0_f64.sqrt())).abs() < 1e-12);
        assert!((y - (2.0 - 15.0_f64.sqrt())).abs() < 1e-12);
        assert!((rep.excess[0] - (x - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn violation_requires_flags() {
        let family = FamilySpec::from_real(vec![1.0], vec![-2.0], vec![1.0]).unwrap();
        assert!(matches!(
            verify_violation(&family),
            Err(Error::HypothesisNotMet(_))
        ));
        // a = 0, d = 0: the product flag fails literally
        let family = FamilySpec::from_real(vec![0.0], vec![-1.0], vec![0.0]).unwrap();
        assert!(!family.prod_ok()[0]);
        assert!(verify_violation(&family).is_err());
    }

    #[test]
    fn determinant_shortcut_special_cases() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 3.0]]);
        let b = ComplexMatrix::from_rows(&[&[I, ZERO], &[Complex64::new(1.0, 1.0), I]]);
        let d = ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[4.0, 0.5]]);
        let zero = ComplexMatrix::zeros(2, 2);
        let m = ComplexMatrix::from_blocks(&a, &b, &zero, &d).unwrap();
        let expected = det(&a).unwrap() * det(&d).unwrap();
        assert!((det_commuting_blocks(&m).unwrap() - expected).norm() < 1e-12);

        let c = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let id = ComplexMatrix::identity(2);
        let m = ComplexMatrix::from_blocks(&id, &b, &c, &d).unwrap();
        let expected = det(&(&d - &(&c * &b))).unwrap();
        assert!((det_commuting_blocks(&m).unwrap() - expected).norm() < 1e-12);
        assert!((det(&m).unwrap() - expected).norm() < 1e-12);

        let m = ComplexMatrix::from_blocks(&a, &b, &c, &d).unwrap();
        assert!(matches!(
            det_commuting_blocks(&m),
            Err(Error::BlocksDoNotCommute { .. })
        ));
    }

    #[test]
    fn example_matrices() {
        let t = fixed_example_t().assemble();
        assert_eq!(t[(0, 3)], I / 11.0);
        assert_eq!(t[(3, 0)], -I / 11.0);
        assert_eq!(t[(1, 2)], I);
        assert_eq!(t[(2, 1)], -I);
        let ev = herm_eigenvalues(&t).unwrap();
        assert!(close(
            &ev,
            &[6.0, 4.0, 0.3 + 1.0 / 11.0, 0.3 - 1.0 / 11.0],
            1e-12
        ));

        for y in [0.0, 0.5, 0.99] {
            let ev = herm_eigenvalues(&fixed_example_ny(y).assemble()).unwrap();
            let mut expected = vec![4.0, 1.0, y, 0.0];
            expected.sort_by(|a, b| b.total_cmp(a));
            assert!(close(&ev, &expected, 1e-12));
        }
        assert!(!fixed_example_ny(-0.1).is_psd(1e-8).unwrap().psd);
        assert!(fixed_example_ny(0.0).is_psd(1e-8).unwrap().psd);
    }

    #[test]
    fn search_edge_cases() {
        assert!(search_psd_violations(2, 0, 42).unwrap().is_empty());
        let hits = screen_corpus([fixed_example_ny(0.5), fixed_example_t()]).unwrap();
        assert_eq!(hits.len(), 2);
        assert!(hits.iter().all(|v| v.report.hypothesis.is_none()));
        let first = search_psd_violations(2, 200, 9).unwrap();
        let again = search_psd_violations(2, 200, 9).unwrap();
        assert_eq!(
            first.iter().map(|v| v.trial).collect::<Vec<_>>(),
            again.iter().map(|v| v.trial).collect::<Vec<_>>()
        );
    }
}
