//! Command-line front end: generators, certificates, the two iteration
//! engines and the shift-parameter tuner, wired for reproducible runs.
//!
//! Exit codes: 0 success / certified / converged; 1 negative verdict
//! (not certified, not converged within the iteration cap); 2 undecided
//! verdict or divergence abort; 3 configuration or i/o failure.

mod descfile;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multisplit_core::certificates::{
    certify_multisplitting, extended_h_matrix, generalized_m_matrix, BlockMatrix,
    MultisplitCondition, Verdict,
};
use multisplit_core::error::CoreError;
use multisplit_core::iteration::{
    iteration_matrix, lifted_spectral_radius, multisplit_run, pss_run, SolveConfig,
};
use multisplit_core::linalg::market::{read_cmatrix, read_vector, write_cmatrix, write_vector};
use multisplit_core::linalg::spectral_radius;
use multisplit_core::problems::ProblemSpec;
use multisplit_core::pss_params::{optimal_alpha, rho_vs_bound_sweep};
use multisplit_core::{C64, CMatrix, CVector, PssSplitting};

use descfile::{load_splitting, LoadedSplitting};
use report::{write_json, write_residual_csv, write_sweep_csv, SolveSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "multisplit",
    about = "Dense multisplitting and parallel PSS solvers with convergence certificates",
    version
)]
struct Cli {
    /// Worker count for per-part sub-solves (falls back to the
    /// MULTISPLIT_WORKERS environment variable, then to 1).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for the generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Relative residual target for the engines.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Directory prepended to relative report paths.
    #[arg(long, global = true)]
    report_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test matrix, write it in Matrix Market format plus a
    /// JSON sidecar describing the generator.
    Gen(GenArgs),
    /// Decide a convergence condition for a splitting or block matrix.
    Certify(CertifyArgs),
    /// Run the multisplitting iteration.
    Solve(SolveArgs),
    /// Run the parallel PSS iteration.
    PssSolve(SolveArgs),
    /// Sweep the PSS shift parameter and locate the minimizer of ||V||.
    TuneAlpha(TuneArgs),
    /// Compare rho(T) against the lifted block form rho(B^-1 C).
    LiftCheck(LiftArgs),
}

#[derive(Args)]
struct GenArgs {
    /// convection-diffusion-1d | convection-diffusion-2d | random-npd |
    /// block-structured
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    /// Drift coefficient for the convection-diffusion families.
    #[arg(long, default_value_t = 0.0)]
    drift: f64,
    /// Skew perturbation scale for random-npd.
    #[arg(long, default_value_t = 0.5)]
    skew_scale: f64,
    /// Block row count for block-structured.
    #[arg(long)]
    m: Option<usize>,
    /// Block size for block-structured.
    #[arg(long)]
    k: Option<usize>,
    /// Off-diagonal block norm cap for block-structured.
    #[arg(long, default_value_t = 0.3)]
    off_scale: f64,
    /// Output Matrix Market path; the sidecar lands at `<out>.json`.
    #[arg(long)]
    out: PathBuf,
    /// Also write an all-ones right-hand side of matching size.
    #[arg(long)]
    rhs_ones: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Splitting description (TOML); required for splitting conditions.
    #[arg(long)]
    splitting: Option<PathBuf>,
    /// Block row count; required for generalized-m / extended-h.
    #[arg(long)]
    blocks: Option<usize>,
    /// yuan | contraction | extended-p-regular | p-regular-hermitian-n |
    /// n-psd | generalized-m | extended-h
    #[arg(long)]
    condition: String,
    /// Write the JSON verdict here as well as to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    rhs: PathBuf,
    #[arg(long)]
    splitting: PathBuf,
    /// Relaxation parameter.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Also compute the exact spectral radius of the iteration matrix.
    #[arg(long, default_value_t = false)]
    exact_rho: bool,
    /// Report base path: writes `<report>.json` and `<report>.csv`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct TuneArgs {
    /// Matrix file; without --splitting it is used directly as P.
    #[arg(long)]
    matrix: PathBuf,
    /// PSS description; the first part provides (P, S) for the sweep.
    #[arg(long)]
    splitting: Option<PathBuf>,
    /// Shift grid as lo:hi:steps.
    #[arg(long)]
    grid: String,
    /// Report base path: writes `<report>.csv` (sweep) and `<report>.json`
    /// (shift analysis).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    splitting: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match &err {
                CliError::Core(CoreError::Divergence { .. }) => EXIT_UNDECIDED,
                _ => EXIT_FAILURE,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let workers = cli
        .workers
        .or_else(|| {
            std::env::var("MULTISPLIT_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);

    match &cli.command {
        Command::Gen(args) => cmd_gen(&cli, args),
        Command::Certify(args) => cmd_certify(&cli, args),
        Command::Solve(args) => cmd_solve(&cli, args, workers, false),
        Command::PssSolve(args) => cmd_solve(&cli, args, workers, true),
        Command::TuneAlpha(args) => cmd_tune_alpha(&cli, args),
        Command::LiftCheck(args) => cmd_lift_check(args),
    }
}

fn report_path(cli: &Cli, path: &Path) -> PathBuf {
    match (&cli.report_dir, path.is_relative()) {
        (Some(dir), true) => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn with_extension(base: &Path, ext: &str) -> PathBuf {
    let mut name = base.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(ext);
    base.with_file_name(name)
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<u8, CliError> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| CliError::Config(format!("family {} needs --{name}", args.family)))
    };
    let spec = match args.family.as_str() {
        "convection-diffusion-1d" => ProblemSpec::ConvectionDiffusion1d {
            n: need(args.n, "n")?,
            drift: args.drift,
        },
        "convection-diffusion-2d" => ProblemSpec::ConvectionDiffusion2d {
            nx: need(args.nx, "nx")?,
            ny: need(args.ny, "ny")?,
            drift: args.drift,
        },
        "random-npd" => ProblemSpec::RandomNpd {
            n: need(args.n, "n")?,
            skew_scale: args.skew_scale,
            seed: cli.seed,
        },
        "block-structured" => ProblemSpec::BlockStructured {
            m: need(args.m, "m")?,
            k: need(args.k, "k")?,
            off_scale: args.off_scale,
            seed: cli.seed,
        },
        other => return Err(CliError::Config(format!("unknown family `{other}`"))),
    };
    let a = spec.generate()?;
    let out = report_path(cli, &args.out);
    write_cmatrix(&out, &a)?;
    write_json(&with_extension(&out, "json"), &spec)?;
    if let Some(rhs) = &args.rhs_ones {
        let ones = CVector::from_element(a.dim(), C64::new(1.0, 0.0));
        write_vector(report_path(cli, rhs), &ones)?;
    }
    println!("wrote {} ({}x{})", out.display(), a.dim(), a.dim());
    Ok(0)
}

fn cmd_certify(cli: &Cli, args: &CertifyArgs) -> Result<u8, CliError> {
    let a = read_cmatrix(&args.matrix)?;

    let (json, verdict) = match args.condition.as_str() {
        "generalized-m" | "extended-h" => {
            let blocks = args.blocks.ok_or_else(|| {
                CliError::Config(format!("condition {} needs --blocks", args.condition))
            })?;
            let bm = BlockMatrix::from_cmatrix(&a, blocks)?;
            if args.condition == "generalized-m" {
                let gm = generalized_m_matrix(&bm)?;
                let v = gm.certificate.verdict;
                (serde_json::to_value(&gm).unwrap(), v)
            } else {
                let cert = extended_h_matrix(&bm)?;
                let v = cert.verdict;
                (serde_json::to_value(&cert).unwrap(), v)
            }
        }
        label => {
            let condition: MultisplitCondition = label
                .parse()
                .map_err(|e: String| CliError::Config(e))?;
            let desc = args.splitting.as_ref().ok_or_else(|| {
                CliError::Config(format!("condition {label} needs --splitting"))
            })?;
            let ms = match load_splitting(desc, &a)? {
                LoadedSplitting::Multi(ms) => ms,
                LoadedSplitting::Pss { .. } => {
                    return Err(CliError::Config(
                        "splitting conditions need a multisplit description".into(),
                    ))
                }
            };
            let cert = certify_multisplitting(&ms, condition)?;
            let v = cert.verdict;
            (serde_json::to_value(&cert).unwrap(), v)
        }
    };

    let text = serde_json::to_string_pretty(&json).unwrap();
    println!("{text}");
    if let Some(path) = &args.report {
        write_json(&report_path(cli, path), &json)?;
    }
    Ok(match verdict {
        Verdict::Certified => 0,
        Verdict::NotCertified => EXIT_NEGATIVE,
        Verdict::Undecided => EXIT_UNDECIDED,
    })
}

fn cmd_solve(cli: &Cli, args: &SolveArgs, workers: usize, pss: bool) -> Result<u8, CliError> {
    let a = read_cmatrix(&args.matrix)?;
    let b = read_vector(&args.rhs)?;
    let cfg = SolveConfig {
        tol: cli.tol,
        max_iter: args.max_iter,
        omega: args.omega,
        workers,
        exact_rho: args.exact_rho,
        ..Default::default()
    };

    let (engine, report) = match (load_splitting(&args.splitting, &a)?, pss) {
        (LoadedSplitting::Multi(ms), false) => ("multisplit", multisplit_run(&ms, &b, &cfg)?),
        (LoadedSplitting::Pss { parts, weights }, true) => {
            ("pss", pss_run(&parts, &weights, &b, &cfg)?)
        }
        (LoadedSplitting::Multi(_), true) => {
            return Err(CliError::Config(
                "pss-solve needs a pss splitting description".into(),
            ))
        }
        (LoadedSplitting::Pss { .. }, false) => {
            return Err(CliError::Config(
                "solve needs a multisplit splitting description".into(),
            ))
        }
    };

    println!(
        "engine={engine} converged={} iterations={} residual={:e} rho_estimate={:e}{}",
        report.converged,
        report.iterates_used,
        report.residual_history.last().unwrap(),
        report.rho_estimate,
        report
            .rho_exact
            .map(|r| format!(" rho_exact={r:e}"))
            .unwrap_or_default(),
    );

    if let Some(base) = &args.report {
        let base = report_path(cli, base);
        let summary = SolveSummary::new(engine, &report, cli.tol, args.omega, workers);
        write_json(&with_extension(&base, "json"), &summary)?;
        write_residual_csv(&with_extension(&base, "csv"), &report.residual_history)?;
    }

    Ok(if report.converged { 0 } else { EXIT_NEGATIVE })
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "grid `{spec}` must be lo:hi:steps"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("bad grid lower bound `{}`", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("bad grid upper bound `{}`", parts[1])))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Config(format!("bad grid step count `{}`", parts[2])))?;
    if steps < 2 || hi <= lo || lo <= 0.0 {
        return Err(CliError::Config(
            "grid needs 0 < lo < hi and at least 2 steps".into(),
        ));
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn cmd_tune_alpha(cli: &Cli, args: &TuneArgs) -> Result<u8, CliError> {
    let a = read_cmatrix(&args.matrix)?;
    let base = match &args.splitting {
        Some(desc) => match load_splitting(desc, &a)? {
            LoadedSplitting::Pss { parts, .. } => parts.into_iter().next().unwrap(),
            LoadedSplitting::Multi(_) => {
                return Err(CliError::Config(
                    "tune-alpha needs a pss splitting description".into(),
                ))
            }
        },
        // Without a splitting the matrix itself is taken as P (S = 0).
        None => PssSplitting::new(a.clone(), a.clone(), CMatrix::zeros(a.dim()), 1.0)?,
    };

    let grid = parse_grid(&args.grid)?;
    let rows = rho_vs_bound_sweep(&base, &grid)?;
    let analysis = optimal_alpha(base.p())?;

    println!(
        "alpha_star={:e} bound={:e} sigma_min={:e} sigma_max={:e} grid_fallback={}",
        analysis.alpha_star,
        analysis.bound_at_star,
        analysis.sigma_min,
        analysis.sigma_max,
        analysis.grid_fallback
    );

    if let Some(base_path) = &args.report {
        let base_path = report_path(cli, base_path);
        write_sweep_csv(&with_extension(&base_path, "csv"), &rows)?;
        write_json(&with_extension(&base_path, "json"), &analysis)?;
    }
    Ok(0)
}

fn cmd_lift_check(args: &LiftArgs) -> Result<u8, CliError> {
    let a = read_cmatrix(&args.matrix)?;
    let ms = match load_splitting(&args.splitting, &a)? {
        LoadedSplitting::Multi(ms) => ms,
        LoadedSplitting::Pss { .. } => {
            return Err(CliError::Config(
                "lift-check needs a multisplit splitting description".into(),
            ))
        }
    };
    let rho_t = spectral_radius(&iteration_matrix(&ms)?)?;
    let rho_lifted = lifted_spectral_radius(&ms)?;
    let gap = (rho_t - rho_lifted).abs();
    let bound = 1e-10 * rho_t.max(1.0);
    let ok = gap <= bound;
    println!("rho_T={rho_t:e} rho_lifted={rho_lifted:e} gap={gap:e} bound={bound:e} ok={ok}");
    Ok(if ok { 0 } else { EXIT_NEGATIVE })
}
