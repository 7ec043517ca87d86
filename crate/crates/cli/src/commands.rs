use std::collections::BTreeMap;

use jacobi_green::cfkernel::{approximant, evaluate, TailStrategy};
use jacobi_green::greens::*;
use jacobi_green::models::{coulomb_spectrum, oscillator_spectrum, ChargeTerm, CoulombModel, EnergyPoint};
use jacobi_green::validate::{contour_integral_g00, residue_suite, ContourSpec};
use jacobi_green::Complex64;
use serde::Serialize;

use crate::config::{MethodChoice, Model, RunConfig, TailChoice, METHOD_A_PRECISION};
use crate::{with_model, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Serialize)]
pub struct Payload {
    pub config: RunConfig,
    pub result: ResultBody,
    pub diagnostics: DiagnosticsOut,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResultBody {
    Matrix(MatrixResult),
    Table(ConvergenceTable),
    Checks(Vec<Check>),
}

#[derive(Debug, Default, Serialize)]
pub struct DiagnosticsOut {
    pub n_used: Option<usize>,
    pub converged: bool,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Serialize)]
pub struct MatrixResult {
    pub method: MethodChoice,
    #[serde(rename = "N")]
    pub n: usize,
    /// Tail ratio at the corner (Method B).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<C>,
    pub values: Vec<Vec<C>>,
    /// Method A output when both methods ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values_a: Option<Vec<Vec<C>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
}

fn rows(m: &CMatrix) -> Vec<Vec<C>> {
    m.rows().map(|r| r.iter().map(|&z| C::from(z)).collect()).collect()
}

pub fn green(cfg: &RunConfig) -> Result<Payload, CliError> {
    let model = cfg.model()?;
    with_model!(&model, m => green_for(m, cfg))
}

fn green_for<M: ExactSeed>(m: &M, cfg: &RunConfig) -> Result<Payload, CliError> {
    let e = cfg.energy();
    let mut diag = DiagnosticsOut {
        converged: true,
        ..Default::default()
    };
    let b = match cfg.method {
        MethodChoice::A => None,
        _ => Some(greens_matrix_b(m, e, cfg.n, &cfg.tail_options())?),
    };
    let a = match cfg.method {
        MethodChoice::B => None,
        _ => Some(greens_matrix_a_exact(m, e, cfg.n, METHOD_A_PRECISION)?),
    };
    if let Some(b) = &b {
        diag.n_used = Some(b.diagnostics.n_used);
        diag.residuals.insert("identity".into(), b.diagnostics.residual);
        diag.residuals.insert("symmetry".into(), symmetry_error(&b.values));
        diag.residuals.insert("recurrence".into(), recurrence_residual(m, e, &b.values));
    }
    if let Some(a) = &a {
        diag.residuals.insert("method_a_estimate".into(), a.diagnostics.residual);
    }
    let result = match (a, b) {
        (Some(a), Some(b)) => MatrixResult {
            method: MethodChoice::Both,
            n: cfg.n,
            ratio: Some(b.ratio.into()),
            values: rows(&b.values),
            deviation: Some(a.values.max_relative_deviation(&b.values)),
            values_a: Some(rows(&a.values)),
        },
        (None, Some(b)) => MatrixResult {
            method: MethodChoice::B,
            n: cfg.n,
            ratio: Some(b.ratio.into()),
            values: rows(&b.values),
            values_a: None,
            deviation: None,
        },
        (Some(a), None) => MatrixResult {
            method: MethodChoice::A,
            n: cfg.n,
            ratio: None,
            values: rows(&a.values),
            values_a: None,
            deviation: None,
        },
        (None, None) => unreachable!("at least one method runs"),
    };
    Ok(Payload {
        config: cfg.clone(),
        result: ResultBody::Matrix(result),
        diagnostics: diag,
    })
}

/// A column of the convergence table: tail closure and Bauer–Muir depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variant {
    pub tail: TailChoice,
    pub bm_depth: usize,
}

impl Variant {
    pub fn name(&self) -> String {
        if self.bm_depth == 0 {
            self.tail.to_string()
        } else {
            format!("{}:{}", self.tail, self.bm_depth)
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let (tail, depth) = match s.split_once(':') {
            Some((t, d)) => (
                t,
                d.parse::<usize>()
                    .map_err(|_| CliError::Config(format!("variant {s:?}: bad Bauer-Muir depth")))?,
            ),
            None => (s, 0),
        };
        Ok(Variant {
            tail: tail.trim().parse()?,
            bm_depth: depth,
        })
    }
}

pub const DEFAULT_VARIANTS: &str = "zero,plus,minus,plus:1,plus:5,plus:8";

#[derive(Debug, Serialize)]
pub struct ConvergenceTable {
    pub variants: Vec<VariantColumn>,
    /// Closed-form `G_00`, when the model has one at this energy.
    pub exact: Option<C>,
}

#[derive(Debug, Serialize)]
pub struct VariantColumn {
    pub name: String,
    pub tail: TailChoice,
    pub bm_depth: usize,
    /// `converged`, `diverged` or `error`.
    pub status: &'static str,
    pub n_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub diverged: bool,
}

pub fn converge(cfg: &RunConfig, variants: &[Variant], depth: usize) -> Result<Payload, CliError> {
    if depth == 0 {
        return Err(CliError::Config("depth must be >= 1".into()));
    }
    let model = cfg.model()?;
    with_model!(&model, m => converge_for(m, cfg, variants, depth))
}

fn converge_for<M: ExactSeed>(m: &M, cfg: &RunConfig, variants: &[Variant], depth: usize) -> Result<Payload, CliError> {
    let e = cfg.energy();
    let (j00, j01) = (m.diag_c64(0, e.eps), m.offdiag_c64(0, e.eps));
    let g00 = |s: Complex64| 1.0 / (j00 - j01 * s);
    let mut columns = Vec::new();
    let mut all_converged = true;
    let mut n_used = 0;
    for v in variants {
        let mut col = VariantColumn {
            name: v.name(),
            tail: v.tail,
            bm_depth: v.bm_depth,
            status: "error",
            n_used: None,
            reason: None,
            rows: Vec::with_capacity(depth),
        };
        match accelerated_fraction(m, e, 0, v.tail.strategy(), v.bm_depth) {
            Ok((cf, w)) => {
                for n in 1..=depth {
                    let value = approximant(&cf, n, w).map(g00).ok().filter(|z| z.re.is_finite() && z.im.is_finite());
                    col.rows.push(Row {
                        n,
                        re: value.map(|z| z.re),
                        im: value.map(|z| z.im),
                        diverged: value.is_none(),
                    });
                }
                match evaluate(&cf, TailStrategy::Explicit(w), cfg.tol, cfg.nmax) {
                    Ok(r) if r.converged => {
                        col.status = "converged";
                        col.n_used = Some(r.n_used);
                        n_used = n_used.max(r.n_used);
                    }
                    Ok(r) => {
                        col.status = "diverged";
                        col.n_used = Some(r.n_used);
                        col.reason = Some(format!("no convergence to tol {:e} within {} terms", cfg.tol, r.n_used));
                    }
                    Err(err) => col.reason = Some(err.to_string()),
                }
            }
            Err(err) => {
                col.reason = Some(err.to_string());
                col.rows.extend((1..=depth).map(|n| Row {
                    n,
                    re: None,
                    im: None,
                    diverged: true,
                }));
            }
        }
        all_converged &= col.status == "converged";
        columns.push(col);
    }
    let exact = exact_g00_c64(m, e.eps).ok().map(C::from);
    Ok(Payload {
        config: cfg.clone(),
        result: ResultBody::Table(ConvergenceTable { variants: columns, exact }),
        diagnostics: DiagnosticsOut {
            n_used: Some(n_used),
            converged: all_converged,
            residuals: BTreeMap::new(),
        },
    })
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, value: jacobi_green::Result<f64>, tolerance: f64) {
        let (value, detail) = match value {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        self.0.push(Check {
            name: name.into(),
            pass: value.is_some_and(|v| v <= tolerance),
            value,
            tolerance,
            detail,
        });
    }
}

/// Optional user contour for `validate`: an ellipse checked against the
/// level it is expected to enclose.
#[derive(Debug, Clone, Copy)]
pub struct ContourArgs {
    pub center: Complex64,
    pub radius_x: f64,
    pub radius_y: f64,
    pub points_per_quadrant: usize,
}

pub struct ValidateOutcome {
    pub payload: Payload,
    pub all_pass: bool,
}

pub fn validate(cfg: &RunConfig, printed_charge: bool, contour: Option<ContourArgs>) -> Result<ValidateOutcome, CliError> {
    let mut model = cfg.model()?;
    if printed_charge {
        model = model.with_charge_term(ChargeTerm::Printed);
    }
    let mut checks = Checks::default();
    let opts = cfg.tail_options();
    match &model {
        Model::Coulomb(m) => {
            let user = match contour {
                Some(c) => {
                    let spec = ContourSpec::ellipse(c.center, c.radius_x, c.radius_y, c.points_per_quadrant)
                        .map_err(CliError::from_config)?;
                    spec.check(m).map_err(CliError::from_config)?;
                    Some(spec)
                }
                None => None,
            };
            contour_checks(m, &opts, user, &mut checks);
            for nr in 0..3 {
                checks.add(format!("pole_nr{nr}"), coulomb_pole_offset(m, nr, &opts), 1e-8);
            }
        }
        Model::Oscillator(m) => {
            for n in 0..3 {
                let level = oscillator_spectrum(m, n);
                let found = find_g00_pole(m, level, 2.0 * m.omega, &opts).map(|p| (p - level).abs());
                checks.add(format!("pole_n{n}"), found, 1e-8);
            }
        }
    }
    with_model!(&model, m => invariant_checks(m, cfg, &mut checks));
    let all_pass = checks.0.iter().all(|c| c.pass);
    Ok(ValidateOutcome {
        payload: Payload {
            config: cfg.clone(),
            result: ResultBody::Checks(checks.0),
            diagnostics: DiagnosticsOut {
                n_used: None,
                converged: all_pass,
                residuals: BTreeMap::new(),
            },
        },
        all_pass,
    })
}

fn coulomb_pole_offset(m: &CoulombModel, nr: usize, opts: &TailOptions) -> jacobi_green::Result<f64> {
    let level = coulomb_spectrum(m, nr)?;
    let gap = coulomb_spectrum(m, nr + 1)? - level;
    Ok((find_g00_pole(m, level, gap, opts)? - level).abs())
}

const CONTOUR_POINTS: usize = 32;

fn contour_checks(m: &CoulombModel, opts: &TailOptions, user: Option<ContourSpec>, checks: &mut Checks) {
    match residue_suite(m, 2, opts) {
        Ok(reports) => {
            checks.add("contour_pole_free", Ok(reports[0].abs_error), 1e-12);
            for (nr, r) in reports[1..].iter().enumerate() {
                checks.add(format!("contour_single_pole_nr{nr}"), Ok(r.abs_error), 1e-10);
            }
            let both = ContourSpec::around_levels(m, 0, 1, CONTOUR_POINTS)
                .and_then(|c| contour_integral_g00(m, &c, opts))
                .map(|i| (i - reports[1].integral - reports[2].integral).norm());
            checks.add("contour_two_pole_additivity", both, 1e-9);
            let deformed = coulomb_spectrum(m, 0).and_then(|e0| {
                let gap = coulomb_spectrum(m, 1)? - e0;
                let c = ContourSpec::ellipse(Complex64::new(e0 - 0.1 * gap, 0.05 * gap), 0.5 * gap, 0.9 * gap, 48)?;
                Ok((contour_integral_g00(m, &c, opts)? - reports[1].integral).norm())
            });
            checks.add("contour_deformation", deformed, 1e-10);
        }
        Err(e) => checks.add("contour_residues", Err(e), 1e-10),
    }
    if let Some(c) = user {
        let r = jacobi_green::validate::residue_report(m, &c, opts).map(|r| r.abs_error);
        checks.add("contour_user", r, 1e-10);
    }
}

fn invariant_checks<M: ExactSeed>(m: &M, cfg: &RunConfig, checks: &mut Checks) {
    let e: EnergyPoint = cfg.energy();
    match greens_matrix_b(m, e, cfg.n, &cfg.tail_options()) {
        Ok(g) => {
            checks.add("identity_residual", Ok(g.diagnostics.residual), 1e-12);
            checks.add("symmetry", Ok(symmetry_error(&g.values)), 1e-12);
            checks.add("factorization", Ok(factorization_check(&g.values)), 1e-10);
            checks.add("recurrence_residual", Ok(recurrence_residual(m, e, &g.values)), 1e-11);
            if e.eps.re < 0.0 && cfg.n <= 30 {
                let dev = greens_matrix_a_exact(m, e, cfg.n, METHOD_A_PRECISION)
                    .map(|a| a.values.max_relative_deviation(&g.values));
                checks.add("cross_method", dev, 1e-10);
            }
        }
        Err(err) => checks.add("greens_matrix_b", Err(err), 0.0),
    }
}
