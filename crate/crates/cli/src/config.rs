use std::fmt;
use std::path::Path;
use std::str::FromStr;

use jacobi_green::cfkernel::{TailStrategy, DEFAULT_NMAX, DEFAULT_TOL};
use jacobi_green::greens::{Precision, TailOptions};
use jacobi_green::models::{ChargeTerm, CoulombModel, EnergyPoint, OscillatorModel};
use jacobi_green::Complex64;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Coulomb,
    Oscillator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MethodChoice {
    A,
    B,
    #[serde(rename = "both")]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailChoice {
    Zero,
    Plus,
    Minus,
}

impl TailChoice {
    pub fn strategy(self) -> TailStrategy {
        match self {
            TailChoice::Zero => TailStrategy::Zero,
            TailChoice::Plus => TailStrategy::FixedPointAttractive,
            TailChoice::Minus => TailStrategy::FixedPointRepulsive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

fn parse_enum<T: Copy>(key: &str, value: &str, table: &[(&str, T)]) -> Result<T, CliError> {
    table
        .iter()
        .find(|(name, _)| name.eq_ignore_ascii_case(value))
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let names: Vec<&str> = table.iter().map(|(n, _)| *n).collect();
            CliError::Config(format!("{key} = {value:?}: expected one of {}", names.join(", ")))
        })
}

impl FromStr for ModelKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        parse_enum("model", s, &[("coulomb", ModelKind::Coulomb), ("oscillator", ModelKind::Oscillator)])
    }
}

impl FromStr for MethodChoice {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        parse_enum("method", s, &[("A", MethodChoice::A), ("B", MethodChoice::B), ("both", MethodChoice::Both)])
    }
}

impl FromStr for TailChoice {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        parse_enum("tail", s, &[("zero", TailChoice::Zero), ("plus", TailChoice::Plus), ("minus", TailChoice::Minus)])
    }
}

impl FromStr for OutputFormat {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        parse_enum("output", s, &[("json", OutputFormat::Json), ("csv", OutputFormat::Csv), ("text", OutputFormat::Text)])
    }
}

impl fmt::Display for TailChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailChoice::Zero => "zero",
            TailChoice::Plus => "plus",
            TailChoice::Minus => "minus",
        })
    }
}

/// Settings after merging defaults, the config file and the flags. Every
/// field is optional here so that the three layers can be overlaid.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: Option<ModelKind>,
    pub dim: Option<u32>,
    pub l: Option<u32>,
    pub zp: Option<f64>,
    pub bs: Option<f64>,
    pub omega: Option<f64>,
    pub omega_p: Option<f64>,
    pub eps_re: Option<f64>,
    pub eps_im: Option<f64>,
    pub n: Option<usize>,
    pub method: Option<MethodChoice>,
    pub tail: Option<TailChoice>,
    pub bm_depth: Option<usize>,
    pub tol: Option<f64>,
    pub nmax: Option<usize>,
    pub output: Option<OutputFormat>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl Overrides {
    /// Fields set in `other` win.
    pub fn overlay(&mut self, other: &Overrides) {
        overlay!(self, other, model, dim, l, zp, bs, omega, omega_p, eps_re, eps_im, n, method, tail, bm_depth, tol, nmax, output);
    }

    /// Flat `key = value` file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<f64, CliError> {
                v.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("line {}: {key} = {v:?} is not a number", lineno + 1)))
            };
            let int = |v: &str| -> Result<usize, CliError> {
                v.parse::<usize>()
                    .map_err(|_| CliError::Config(format!("line {}: {key} = {v:?} is not an integer", lineno + 1)))
            };
            match key {
                "model" => o.model = Some(value.parse()?),
                "D" => o.dim = Some(int(value)? as u32),
                "l" => o.l = Some(int(value)? as u32),
                "Zp" => o.zp = Some(num(value)?),
                "bS" => o.bs = Some(num(value)?),
                "omega" => o.omega = Some(num(value)?),
                "omegaP" => o.omega_p = Some(num(value)?),
                "eps_re" | "E_re" => o.eps_re = Some(num(value)?),
                "eps_im" | "E_im" => o.eps_im = Some(num(value)?),
                "N" => o.n = Some(int(value)?),
                "method" => o.method = Some(value.parse()?),
                "tail" => o.tail = Some(value.parse()?),
                "bm_depth" => o.bm_depth = Some(int(value)?),
                "tol" => o.tol = Some(num(value)?),
                "nmax" => o.nmax = Some(int(value)?),
                "output" => o.output = Some(value.parse()?),
                _ => return Err(CliError::Config(format!("line {}: unknown key {key:?}", lineno + 1))),
            }
        }
        Ok(o)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub model: ModelKind,
    #[serde(rename = "D")]
    pub dim: u32,
    pub l: u32,
    #[serde(rename = "Zp", skip_serializing_if = "Option::is_none")]
    pub zp: Option<f64>,
    #[serde(rename = "bS", skip_serializing_if = "Option::is_none")]
    pub bs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(rename = "omegaP", skip_serializing_if = "Option::is_none")]
    pub omega_p: Option<f64>,
    pub eps_re: f64,
    pub eps_im: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub method: MethodChoice,
    pub tail: TailChoice,
    pub bm_depth: usize,
    pub tol: f64,
    pub nmax: usize,
    pub output: OutputFormat,
}

impl RunConfig {
    /// Defaults under the overlay; model parameters of the other model are an
    /// error.
    pub fn resolve(o: &Overrides) -> Result<Self, CliError> {
        let model = o.model.unwrap_or(ModelKind::Coulomb);
        let (zp, bs, omega, omega_p) = match model {
            ModelKind::Coulomb => {
                if o.omega.is_some() || o.omega_p.is_some() {
                    return Err(CliError::Config("omega/omegaP given for the coulomb model".into()));
                }
                (Some(o.zp.unwrap_or(2.0)), Some(o.bs.unwrap_or(1.0)), None, None)
            }
            ModelKind::Oscillator => {
                if o.zp.is_some() || o.bs.is_some() {
                    return Err(CliError::Config("Zp/bS given for the oscillator model".into()));
                }
                (None, None, Some(o.omega.unwrap_or(1.0)), Some(o.omega_p.unwrap_or(1.3)))
            }
        };
        let cfg = RunConfig {
            model,
            dim: o.dim.unwrap_or(3),
            l: o.l.unwrap_or(0),
            zp,
            bs,
            omega,
            omega_p,
            eps_re: o.eps_re.unwrap_or(-4.0),
            eps_im: o.eps_im.unwrap_or(0.0),
            n: o.n.unwrap_or(20),
            method: o.method.unwrap_or(MethodChoice::B),
            tail: o.tail.unwrap_or(TailChoice::Plus),
            bm_depth: o.bm_depth.unwrap_or(0),
            tol: o.tol.unwrap_or(DEFAULT_TOL),
            nmax: o.nmax.unwrap_or(DEFAULT_NMAX),
            output: o.output.unwrap_or(OutputFormat::Json),
        };
        if cfg.n == 0 {
            return Err(CliError::Config("N must be >= 1".into()));
        }
        if !(cfg.tol > 0.0) {
            return Err(CliError::Config(format!("tol = {} must be positive", cfg.tol)));
        }
        if cfg.nmax < 2 {
            return Err(CliError::Config("nmax must be >= 2".into()));
        }
        if !(cfg.eps_re.is_finite() && cfg.eps_im.is_finite()) {
            return Err(CliError::Config("energy must be finite".into()));
        }
        cfg.model()?;
        Ok(cfg)
    }

    pub fn energy(&self) -> EnergyPoint {
        EnergyPoint::new(Complex64::new(self.eps_re, self.eps_im))
    }

    pub fn tail_options(&self) -> TailOptions {
        TailOptions::default()
            .with_tail(self.tail.strategy())
            .with_bm_depth(self.bm_depth)
            .with_tol(self.tol)
            .with_nmax(self.nmax)
    }

    pub fn model(&self) -> Result<Model, CliError> {
        let m = match self.model {
            ModelKind::Coulomb => Model::Coulomb(
                CoulombModel::new(self.dim, self.l, self.zp.unwrap_or(2.0), self.bs.unwrap_or(1.0))
                    .map_err(CliError::from_config)?,
            ),
            ModelKind::Oscillator => Model::Oscillator(
                OscillatorModel::new(self.dim, self.l, self.omega.unwrap_or(1.0), self.omega_p.unwrap_or(1.3))
                    .map_err(CliError::from_config)?,
            ),
        };
        Ok(m)
    }
}

/// Working precision of Method A in the CLI. Double-double keeps the
/// cross-method comparison at the 1e-10 level up to N of a few tens.
pub const METHOD_A_PRECISION: Precision = Precision::DoubleDouble;

#[derive(Debug, Clone)]
pub enum Model {
    Coulomb(CoulombModel),
    Oscillator(OscillatorModel),
}

impl Model {
    pub fn with_charge_term(self, t: ChargeTerm) -> Self {
        match self {
            Model::Coulomb(m) => Model::Coulomb(m.with_charge_term(t)),
            other => other,
        }
    }
}

/// Run generic code on the concrete model.
#[macro_export]
macro_rules! with_model {
    ($model:expr, $m:ident => $body:expr) => {
        match $model {
            $crate::config::Model::Coulomb($m) => $body,
            $crate::config::Model::Oscillator($m) => $body,
        }
    };
}
