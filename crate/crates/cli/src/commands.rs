use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use symnorm::blockdecomp::{check_loewner_facts, two_unitary_decompose};
use symnorm::counterexamples::{
    build_family, det_commuting_blocks, fixed_example_ny, fixed_example_t, quadratic_eigs,
    search_psd_violations, FamilySpec,
};
use symnorm::inequalities::{
    check_main_inequality, factor_two_bound, reduce_to_hermitian_block, InequalityReport,
    ReductionSide,
};
use symnorm::norms::{dominance, ky_fan_profile};
use symnorm::numkernel::{det, herm_eigenvalues, is_psd, unitarity_error};
use symnorm::{tolerance, BlockMatrix, Part};

use crate::matfile::{parse_matrix_str, MatFileError, MatrixFile};
use crate::report::{
    cx, margin_rows, matrix_rows, sha256_hex, to_json, to_text, BlocksJson, Cx, MarginRow, Report,
    Verdict,
};

#[derive(Debug, Parser)]
#[command(
    name = "symnorm",
    version,
    about = "Symmetric-norm inequalities for PSD 2x2 block matrices"
)]
pub struct Cli {
    /// Relative tolerance for verdicts.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    #[value(name = "T")]
    T,
    #[value(name = "Ny")]
    Ny,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ||M||_k <= ||A+B||_k for every k.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// M = U (top ⊕ 0) U* + V (0 ⊕ bottom) V* for PSD M.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "re", value_parser = parse_part)]
        mode: Part,
    },
    /// Singular values and Ky Fan norms of any square matrix.
    Norms {
        #[arg(long)]
        input: PathBuf,
        /// Print the full Ky Fan profile.
        #[arg(long)]
        kyfan: bool,
    },
    /// A+B ± 2Im(X) and A+B ± 2Re(X) are PSD for PSD M.
    Facts {
        #[arg(long)]
        input: PathBuf,
    },
    /// Unitary congruence to a Hermitian off-diagonal block when X commutes with A or B.
    Reduce {
        #[arg(long)]
        input: PathBuf,
    },
    /// ||M||_k <= 2 ||A+B||_k for PSD M.
    Bound2 {
        #[arg(long)]
        input: PathBuf,
    },
    /// Diagonal family [[diag(a), diag(d)], [diag(d), diag(b)]] with closed-form spectrum.
    GenFamily {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        a: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        b: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        d: Vec<f64>,
        /// Confirm that the family violates the inequality in every Ky Fan norm.
        #[arg(long)]
        verify: bool,
    },
    /// Built-in examples.
    Examples {
        #[arg(long, value_enum)]
        name: ExampleName,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        y: f64,
        /// Run the main inequality check on the example.
        #[arg(long)]
        check: bool,
    },
    /// Seeded search for PSD matrices that violate the inequality.
    Search {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// det(M) = det(AD - CB) for M = [[A, B], [C, D]] with AC = CA.
    DetShortcut {
        #[arg(long)]
        input: PathBuf,
    },
}

fn parse_part(s: &str) -> Result<Part, String> {
    s.parse()
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] MatFileError),
    #[error(transparent)]
    Core(#[from] symnorm::Error),
}

/// Exit code plus the two output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    run(&cli, args.get(1..).unwrap_or_default())
}

pub fn run(cli: &Cli, echo: &[String]) -> Outcome {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!(
                "error: --tol must be a nonnegative number, got {}\n",
                cli.tol
            ),
        };
    }
    let ctx = Ctx { cli, echo };
    match dispatch(&ctx) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    echo: &'a [String],
}

impl Ctx<'_> {
    fn emit<T: Serialize>(
        &self,
        digest: Option<String>,
        tolerance: f64,
        verdict: Verdict,
        body: T,
    ) -> Outcome {
        let report = Report {
            command: self.echo.to_vec(),
            input_sha256: digest,
            tolerance,
            verdict,
            body,
        };
        let stdout = match self.cli.format {
            Format::Json => to_json(&report),
            Format::Text => to_text(&report),
        };
        Outcome {
            code: verdict.exit_code(),
            stdout,
            stderr: String::new(),
        }
    }
}

fn read_input(path: &Path) -> Result<(MatrixFile, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| MatFileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| MatFileError::Parse {
        context: "input".into(),
        message: e.to_string(),
    })?;
    Ok((parse_matrix_str(&text)?, sha256_hex(&bytes)))
}

fn read_block(path: &Path) -> Result<(BlockMatrix, String), CliError> {
    let (file, digest) = read_input(path)?;
    Ok((file.into_block()?, digest))
}

fn require_psd(m: &BlockMatrix, tol: f64) -> Result<f64, CliError> {
    let check = m.is_psd(tol)?;
    if !check.psd {
        return Err(symnorm::Error::NotPsd {
            min_eigenvalue: check.min_eigenvalue,
        }
        .into());
    }
    Ok(check.min_eigenvalue)
}

fn dispatch(ctx: &Ctx) -> Result<Outcome, CliError> {
    let tol = ctx.cli.tol;
    match &ctx.cli.command {
        Command::Check { input } => {
            let (m, digest) = read_block(input)?;
            let body = check_body(&m, tol)?;
            let verdict = Verdict::from_holds(body.holds);
            Ok(ctx.emit(Some(digest), tol, verdict, body))
        }
        Command::Decompose { input, mode } => {
            let (m, digest) = read_block(input)?;
            require_psd(&m, tol)?;
            let d = two_unitary_decompose(&m, *mode)?;
            let body = DecomposeBody {
                mode: mode.as_str(),
                reconstruction_error: d.relative_error(&m),
                unitarity_error_u: unitarity_error(&d.u).unwrap_or(f64::NAN),
                unitarity_error_v: unitarity_error(&d.v).unwrap_or(f64::NAN),
                u: matrix_rows(&d.u),
                v: matrix_rows(&d.v),
                top: matrix_rows(&d.top),
                bottom: matrix_rows(&d.bottom),
            };
            let ok = body.reconstruction_error <= tol
                && body.unitarity_error_u <= tol * d.u.rows() as f64
                && body.unitarity_error_v <= tol * d.v.rows() as f64;
            Ok(ctx.emit(Some(digest), tol, Verdict::from_holds(ok), body))
        }
        Command::Norms { input, kyfan } => {
            let (file, digest) = read_input(input)?;
            let m = file.matrix();
            let profile = ky_fan_profile(&m, m.rows())?;
            let body = NormsBody {
                size: m.rows(),
                singular_values: profile.sigma().to_vec(),
                spectral: profile.spectral(),
                trace: profile.trace_norm(),
                frobenius: profile.frobenius(),
                ky_fan: kyfan.then(|| {
                    profile
                        .cumsum()
                        .iter()
                        .enumerate()
                        .map(|(i, &value)| KyFanRow { k: i + 1, value })
                        .collect()
                }),
            };
            Ok(ctx.emit(Some(digest), tol, Verdict::Computed, body))
        }
        Command::Facts { input } => {
            let (m, digest) = read_block(input)?;
            require_psd(&m, tol)?;
            let facts = check_loewner_facts(&m, tol)?;
            let checks: Vec<FactRow> = facts
                .checks()
                .iter()
                .map(|(label, c)| FactRow {
                    matrix: label,
                    psd: c.psd,
                    min_eigenvalue: c.min_eigenvalue,
                    spectral_norm: c.spectral_norm,
                })
                .collect();
            let body = FactsBody {
                all_hold: facts.all_hold(),
                checks,
            };
            Ok(ctx.emit(Some(digest), tol, Verdict::from_holds(body.all_hold), body))
        }
        Command::Reduce { input } => {
            let (m, digest) = read_block(input)?;
            require_psd(&m, tol)?;
            let cert = reduce_to_hermitian_block(&m)?.ok_or_else(|| {
                symnorm::Error::HypothesisNotMet(
                    "neither X* commutes with A nor X commutes with B".into(),
                )
            })?;
            let scale = tolerance::scale(m.assemble().frobenius_norm());
            let x_dev = cert.reduced.x().hermitian_deviation().unwrap_or(f64::NAN);
            let inequality = check_body(&m, tol)?;
            let ok =
                cert.congruence_error <= tol * scale && x_dev <= tol * scale && inequality.holds;
            let body = ReduceBody {
                side: match cert.side {
                    ReductionSide::A => "A",
                    ReductionSide::B => "B",
                },
                congruence_error: cert.congruence_error,
                reduced_x_hermitian_deviation: x_dev,
                w: matrix_rows(&cert.w),
                reduced: BlocksJson::from(&cert.reduced),
                inequality,
            };
            Ok(ctx.emit(Some(digest), tol, Verdict::from_holds(ok), body))
        }
        Command::Bound2 { input } => {
            let (m, digest) = read_block(input)?;
            require_psd(&m, tol)?;
            let r = factor_two_bound(&m)?;
            let size = 2 * m.n();
            let lhs = ky_fan_profile(&m.assemble(), size)?;
            let rhs = ky_fan_profile(&m.a_plus_b().scale_real(2.0), size)?;
            let abs_tol = tol * tolerance::scale(rhs.trace_norm());
            let d = dominance(&lhs, &rhs, Some(abs_tol));
            let body = Bound2Body {
                holds: d.dominated,
                first_violation: d.first_violation,
                min_margin: d.min_margin(),
                absolute_tolerance: abs_tol,
                strict: r.strict,
                strict_expected: r.strict_expected,
                m1_min_eigenvalue: r.m1_min_eigenvalue,
                m2_min_eigenvalue: r.m2_min_eigenvalue,
                margins: margin_rows(lhs.cumsum(), rhs.cumsum()),
            };
            let ok = body.holds && (!body.strict_expected || body.strict);
            Ok(ctx.emit(Some(digest), tol, Verdict::from_holds(ok), body))
        }
        Command::GenFamily { a, b, d, verify } => {
            let family = FamilySpec::from_real(a.clone(), b.clone(), d.clone())?;
            let block = build_family(&family)?;
            let roots = quadratic_eigs(&family);
            let verification = if *verify {
                Some(verify_family(&family, &block, tol)?)
            } else {
                None
            };
            let verdict = match &verification {
                Some(v) => Verdict::from_holds(v.confirmed),
                None => Verdict::Computed,
            };
            let body = FamilyBody {
                a: a.clone(),
                b: b.clone(),
                d: d.clone(),
                sum_ok: family.sum_ok(),
                prod_ok: family.prod_ok(),
                roots: roots.pairs.iter().map(|&(x, y)| [x, y]).collect(),
                eigenvalues: roots.eigenvalues(),
                matrix: BlocksJson::from(&block),
                verification,
            };
            Ok(ctx.emit(None, tol, verdict, body))
        }
        Command::Examples { name, y, check } => {
            let (m, y) = match name {
                ExampleName::T => (fixed_example_t(), None),
                ExampleName::Ny => (fixed_example_ny(*y), Some(*y)),
            };
            let psd = m.is_psd(tol)?;
            let eigenvalues = herm_eigenvalues(&m.assemble())?;
            let n = m.n();
            let check_report = if *check {
                Some(check_body(&m, tol)?)
            } else {
                None
            };
            let verdict = match &check_report {
                Some(c) => Verdict::from_holds(c.holds),
                None => Verdict::Computed,
            };
            let body = ExampleBody {
                name: match name {
                    ExampleName::T => "T",
                    ExampleName::Ny => "Ny",
                },
                y,
                matrix: BlocksJson::from(&m),
                psd: psd.psd,
                eigenvalues,
                spectral_m: psd.spectral_norm,
                spectral_a_plus_b: ky_fan_profile(&m.a_plus_b(), n)?.spectral(),
                check: check_report,
            };
            Ok(ctx.emit(None, tol, verdict, body))
        }
        Command::Search { dim, trials, seed } => {
            let hits = search_psd_violations(*dim, *trials, *seed)?;
            let body = SearchBody {
                dim: *dim,
                trials: *trials,
                seed: *seed,
                generator: "wishart",
                violations: hits.len(),
                hits: hits
                    .iter()
                    .map(|v| SearchHit {
                        trial: v.trial.unwrap_or_default(),
                        min_eigenvalue: v.min_eigenvalue,
                        first_violation: v.report.first_violation,
                        min_margin: v.report.min_margin(),
                        matrix: BlocksJson::from(&v.matrix),
                    })
                    .collect(),
            };
            // screening runs at the library's fixed tolerance
            Ok(ctx.emit(None, tolerance::DEFAULT, Verdict::Computed, body))
        }
        Command::DetShortcut { input } => {
            let (file, digest) = read_input(input)?;
            let m = file.matrix();
            let shortcut = det_commuting_blocks(&m)?;
            let direct = det(&m)?;
            // Hadamard's bound: |det M| <= product of row norms
            let hadamard: f64 = (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                .product();
            let difference = (shortcut - direct).norm();
            let agree = difference <= tol * hadamard.max(f64::MIN_POSITIVE);
            let body = DetBody {
                size: m.rows(),
                shortcut: cx(shortcut),
                direct: cx(direct),
                difference,
                hadamard_bound: hadamard,
                agree,
            };
            Ok(ctx.emit(Some(digest), tol, Verdict::from_holds(agree), body))
        }
    }
}

fn check_body(m: &BlockMatrix, tol: f64) -> Result<CheckBody, CliError> {
    let n = m.n();
    let ab_trace = ky_fan_profile(&m.a_plus_b(), n)?.trace_norm();
    let abs_tol = tol * tolerance::scale(ab_trace);
    let r: InequalityReport = check_main_inequality(m, Some(abs_tol))?;
    let psd = m.is_psd(tol)?;
    Ok(CheckBody {
        hypothesis: r.hypothesis.tag(),
        shift: r.hypothesis.shift(),
        psd: psd.psd,
        min_eigenvalue: psd.min_eigenvalue,
        holds: r.holds,
        first_violation: r.first_violation,
        min_margin: r.min_margin(),
        absolute_tolerance: abs_tol,
        eigenvalues: herm_eigenvalues(&m.assemble())?,
        singular_values_m: r.m_profile.sigma().to_vec(),
        singular_values_a_plus_b: r.a_plus_b_profile.sigma().to_vec(),
        margins: margin_rows(r.m_profile.cumsum(), r.a_plus_b_profile.cumsum()),
    })
}

fn verify_family(
    family: &FamilySpec,
    block: &BlockMatrix,
    tol: f64,
) -> Result<FamilyVerification, CliError> {
    if !family.is_valid() {
        let (s, p) = (family.sum_ok(), family.prod_ok());
        let i = (0..family.n())
            .find(|&i| !(s[i] && p[i]))
            .unwrap_or_default();
        return Err(symnorm::Error::HypothesisNotMet(format!(
            "index {i}: a+b >= 0 is {}, a*b - d^2 < 0 is {}",
            s[i], p[i]
        ))
        .into());
    }
    let full = block.assemble();
    let size = full.rows();
    let n_psd = is_psd(&full, tol)?;
    let neg_psd = is_psd(&-&full, tol)?;
    let lhs = ky_fan_profile(&full, size)?;
    let rhs = ky_fan_profile(&block.a_plus_b(), size)?;
    let excess: Vec<MarginRow> = margin_rows(rhs.cumsum(), lhs.cumsum());
    let strict = excess.iter().all(|row| row.margin > 0.0);
    Ok(FamilyVerification {
        n_psd: n_psd.psd,
        neg_n_psd: neg_psd.psd,
        min_eigenvalue: n_psd.min_eigenvalue,
        strict_excess: strict,
        confirmed: !n_psd.psd && !neg_psd.psd && strict,
        excess,
    })
}

#[derive(Debug, Serialize)]
struct CheckBody {
    hypothesis: &'static str,
    shift: Option<f64>,
    psd: bool,
    min_eigenvalue: f64,
    holds: bool,
    first_violation: Option<usize>,
    min_margin: f64,
    absolute_tolerance: f64,
    eigenvalues: Vec<f64>,
    singular_values_m: Vec<f64>,
    singular_values_a_plus_b: Vec<f64>,
    /// lhs = ||M||_k, rhs = ||(A+B) ⊕ 0||_k.
    margins: Vec<MarginRow>,
}

#[derive(Debug, Serialize)]
struct DecomposeBody {
    mode: &'static str,
    reconstruction_error: f64,
    unitarity_error_u: f64,
    unitarity_error_v: f64,
    u: Vec<Vec<Cx>>,
    v: Vec<Vec<Cx>>,
    top: Vec<Vec<Cx>>,
    bottom: Vec<Vec<Cx>>,
}

#[derive(Debug, Serialize)]
struct KyFanRow {
    k: usize,
    value: f64,
}

#[derive(Debug, Serialize)]
struct NormsBody {
    size: usize,
    singular_values: Vec<f64>,
    spectral: f64,
    trace: f64,
    frobenius: f64,
    ky_fan: Option<Vec<KyFanRow>>,
}

#[derive(Debug, Serialize)]
struct FactRow {
    matrix: &'static str,
    psd: bool,
    min_eigenvalue: f64,
    spectral_norm: f64,
}

#[derive(Debug, Serialize)]
struct FactsBody {
    all_hold: bool,
    checks: Vec<FactRow>,
}

#[derive(Debug, Serialize)]
struct ReduceBody {
    side: &'static str,
    congruence_error: f64,
    reduced_x_hermitian_deviation: f64,
    w: Vec<Vec<Cx>>,
    reduced: BlocksJson,
    inequality: CheckBody,
}

#[derive(Debug, Serialize)]
struct Bound2Body {
    holds: bool,
    first_violation: Option<usize>,
    min_margin: f64,
    absolute_tolerance: f64,
    strict: bool,
    strict_expected: bool,
    m1_min_eigenvalue: f64,
    m2_min_eigenvalue: f64,
    /// lhs = ||M||_k, rhs = 2 ||(A+B) ⊕ 0||_k.
    margins: Vec<MarginRow>,
}

#[derive(Debug, Serialize)]
struct FamilyVerification {
    n_psd: bool,
    neg_n_psd: bool,
    min_eigenvalue: f64,
    strict_excess: bool,
    confirmed: bool,
    /// lhs = ||(A+B) ⊕ 0||_k, rhs = ||N||_k; margin is the excess of N.
    excess: Vec<MarginRow>,
}

#[derive(Debug, Serialize)]
struct FamilyBody {
    a: Vec<f64>,
    b: Vec<f64>,
    d: Vec<f64>,
    sum_ok: Vec<bool>,
    prod_ok: Vec<bool>,
    roots: Vec<[f64; 2]>,
    eigenvalues: Vec<f64>,
    matrix: BlocksJson,
    verification: Option<FamilyVerification>,
}

#[derive(Debug, Serialize)]
struct ExampleBody {
    name: &'static str,
    y: Option<f64>,
    matrix: BlocksJson,
    psd: bool,
    eigenvalues: Vec<f64>,
    spectral_m: f64,
    spectral_a_plus_b: f64,
    check: Option<CheckBody>,
}

#[derive(Debug, Serialize)]
struct SearchHit {
    trial: u64,
    min_eigenvalue: f64,
    first_violation: Option<usize>,
    min_margin: f64,
    matrix: BlocksJson,
}

#[derive(Debug, Serialize)]
struct SearchBody {
    dim: usize,
    trials: u64,
    seed: u64,
    generator: &'static str,
    violations: usize,
    hits: Vec<SearchHit>,
}

#[derive(Debug, Serialize)]
struct DetBody {
    size: usize,
    shortcut: Cx,
    direct: Cx,
    difference: f64,
    hadamard_bound: f64,
    agree: bool,
}
