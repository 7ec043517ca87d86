//! `jgreen`: Green's matrices, convergence tables and validation checks for
//! Jacobi-matrix Hamiltonians.

mod commands;
mod config;
mod output;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jacobi_green::Complex64;

use commands::{ContourArgs, Variant, DEFAULT_VARIANTS};
use config::{OutputFormat, Overrides, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or parameters: exit 2.
    Config(String),
    /// Non-convergence, singular energy or matrix: exit 3.
    Numeric(jacobi_green::Error),
}

impl CliError {
    /// Library errors caused by the input rather than the numerics.
    pub fn from_config(e: jacobi_green::Error) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        use jacobi_green::Error as E;
        match self {
            CliError::Config(_) => "config",
            CliError::Numeric(e) => match e {
                E::InvalidParameter(_) => "invalid_parameter",
                E::GammaPole(_) => "gamma_pole",
                E::Domain { .. } => "domain",
                E::NonConvergence { .. } => "non_convergence",
                E::ZeroCoefficient { .. } => "zero_coefficient",
                E::DivisionByZero { .. } => "division_by_zero",
                E::TransformUndefined { .. } => "transform_undefined",
                E::MissingLimits => "missing_limits",
                E::DegenerateFixedPoints(_) => "degenerate_fixed_points",
                E::SingularEnergy(_) => "singular_energy",
                E::DiagonalOperator => "diagonal_operator",
                E::NoBoundStates => "no_bound_states",
                E::SingularMatrix { .. } => "singular_matrix",
                E::Unstable { .. } => "unstable",
                E::InvalidContour(_) => "invalid_contour",
                E::QuadratureDisagreement { .. } => "quadrature_disagreement",
                E::RootNotFound(_) => "root_not_found",
            },
        }
    }
}

impl From<jacobi_green::Error> for CliError {
    fn from(e: jacobi_green::Error) -> Self {
        use jacobi_green::Error as E;
        match e {
            E::InvalidParameter(_) | E::InvalidContour(_) | E::NoBoundStates => CliError::from_config(e),
            other => CliError::Numeric(other),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "configuration error: {s}"),
            CliError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "jgreen", version, about = "Green's matrices of Jacobi-matrix Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated Green's matrix by Method B, Method A or both.
    Green(Common),
    /// Approximants of G_00 against depth for several tail variants.
    Converge(ConvergeArgs),
    /// Contour-residue, pole and structure checks.
    Validate(ValidateArgs),
}

#[derive(Args)]
#[command(rename_all = "verbatim")]
struct Common {
    /// Flat key=value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// coulomb or oscillator.
    #[arg(long)]
    model: Option<String>,
    /// Space dimension.
    #[arg(long = "D")]
    dim: Option<u32>,
    /// Angular momentum.
    #[arg(long)]
    l: Option<u32>,
    /// Scaled charge Z' (coulomb).
    #[arg(long = "Zp", allow_negative_numbers = true)]
    zp: Option<f64>,
    /// Sturmian basis scale (coulomb).
    #[arg(long = "bS")]
    bs: Option<f64>,
    /// Oscillator frequency.
    #[arg(long)]
    omega: Option<f64>,
    /// Basis frequency (oscillator).
    #[arg(long = "omegaP")]
    omega_p: Option<f64>,
    /// Energy as RE [IM]; --E is an alias.
    #[arg(long, alias = "E", num_args = 1..=2, allow_negative_numbers = true, value_names = ["RE", "IM"])]
    eps: Option<Vec<f64>>,
    /// Truncation size.
    #[arg(long = "N")]
    n: Option<usize>,
    /// A, B or both.
    #[arg(long)]
    method: Option<String>,
    /// zero, plus or minus.
    #[arg(long)]
    tail: Option<String>,
    /// Bauer–Muir levels applied to the tail fraction.
    #[arg(long = "bm-depth", alias = "bm_depth")]
    bm_depth: Option<usize>,
    /// Relative convergence tolerance of the tail fraction.
    #[arg(long)]
    tol: Option<f64>,
    /// Depth limit of the tail fraction.
    #[arg(long)]
    nmax: Option<usize>,
    /// json, csv or text.
    #[arg(long)]
    output: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    common: Common,
    /// Rows in the table.
    #[arg(long, default_value_t = 40)]
    depth: usize,
    /// Comma-separated tail[:bm_depth] list.
    #[arg(long, default_value = DEFAULT_VARIANTS)]
    variants: String,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// Use the opposite sign of the charge term (negative control).
    #[arg(long, hide = true)]
    printed_charge_sign: bool,
    /// Extra contour: center RE IM.
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["RE", "IM"])]
    contour_center: Option<Vec<f64>>,
    /// Horizontal semi-axis.
    #[arg(long, requires = "contour_center")]
    contour_rx: Option<f64>,
    /// Vertical semi-axis (defaults to the horizontal one).
    #[arg(long, requires = "contour_center")]
    contour_ry: Option<f64>,
    /// Gauss–Legendre points on each quarter of the contour.
    #[arg(long, default_value_t = 32)]
    points_per_quadrant: usize,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut merged = Overrides::default();
        if let Some(path) = &self.config {
            merged.overlay(&Overrides::from_file(path)?);
        }
        let (eps_re, eps_im) = match self.eps.as_deref() {
            Some([re]) => (Some(*re), Some(0.0)),
            Some([re, im]) => (Some(*re), Some(*im)),
            _ => (None, None),
        };
        let flags = Overrides {
            model: self.model.as_deref().map(str::parse).transpose()?,
            dim: self.dim,
            l: self.l,
            zp: self.zp,
            bs: self.bs,
            omega: self.omega,
            omega_p: self.omega_p,
            eps_re,
            eps_im,
            n: self.n,
            method: self.method.as_deref().map(str::parse).transpose()?,
            tail: self.tail.as_deref().map(str::parse).transpose()?,
            bm_depth: self.bm_depth,
            tol: self.tol,
            nmax: self.nmax,
            output: self.output.as_deref().map(str::parse).transpose()?,
        };
        merged.overlay(&flags);
        RunConfig::resolve(&merged)
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Config(format!("cannot write output: {e}")))
        }
    }
}

/// Exit status and the text to print.
fn run(cli: Cli) -> (u8, Result<(), CliError>) {
    let common = match &cli.command {
        Command::Green(c) => c,
        Command::Converge(a) => &a.common,
        Command::Validate(a) => &a.common,
    };
    let cfg = match common.resolve() {
        Ok(c) => c,
        Err(e) => return report(e, None, OutputFormat::Json),
    };
    let format = cfg.output;
    let outcome = match &cli.command {
        Command::Green(_) => commands::green(&cfg).map(|p| (p, 0)),
        Command::Converge(a) => a
            .variants
            .split(',')
            .map(str::parse::<Variant>)
            .collect::<Result<Vec<_>, _>>()
            .and_then(|v| commands::converge(&cfg, &v, a.depth))
            .map(|p| (p, 0)),
        Command::Validate(a) => contour_args(a)
            .and_then(|c| commands::validate(&cfg, a.printed_charge_sign, c))
            .map(|o| (o.payload, if o.all_pass { 0 } else { 1 })),
    };
    match outcome {
        Ok((payload, code)) => (code, emit(&output::render(&payload, format), common.out.as_ref())),
        Err(e) => report(e, Some(&cfg), format),
    }
}

fn contour_args(a: &ValidateArgs) -> Result<Option<ContourArgs>, CliError> {
    let Some(center) = a.contour_center.as_deref() else {
        return Ok(None);
    };
    let rx = a
        .contour_rx
        .ok_or_else(|| CliError::Config("--contour-center needs --contour-rx".into()))?;
    Ok(Some(ContourArgs {
        center: Complex64::new(center[0], center[1]),
        radius_x: rx,
        radius_y: a.contour_ry.unwrap_or(rx),
        points_per_quadrant: a.points_per_quadrant,
    }))
}

/// Error record on stdout for json output, a one-line message on stderr
/// otherwise.
fn report(e: CliError, cfg: Option<&RunConfig>, format: OutputFormat) -> (u8, Result<(), CliError>) {
    let code = e.exit_code();
    match format {
        OutputFormat::Json => (code, emit(&output::error_record(&e, cfg), None)),
        _ => {
            eprintln!("error[{}]: {e}", e.kind());
            (code, Ok(()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, written) = run(cli);
    if let Err(e) = written {
        eprintln!("error[{}]: {e}", e.kind());
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
