use num_complex::Complex64;

use crate::cfkernel::{
    approximant, bauer_muir_iterated, evaluate, fixed_points, ContinuedFraction, Degeneracy,
    EvaluationReport, TailStrategy, DEFAULT_NMAX, DEFAULT_TOL,
};
use crate::models::{EnergyPoint, JacobiOperator};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sheet {
    #[default]
    Physical,
    Unphysical,
}

/// How the tail ratio is computed. In this module the fixed-point strategies
/// name sheets: `FixedPointAttractive` is the physical-sheet root and
/// `FixedPointRepulsive` the other one, also where their moduli tie.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailOptions {
    pub tail: TailStrategy,
    pub bm_depth: usize,
    pub tol: f64,
    pub nmax: usize,
}

impl Default for TailOptions {
    fn default() -> Self {
        Self {
            tail: TailStrategy::FixedPointAttractive,
            bm_depth: 0,
            tol: DEFAULT_TOL,
            nmax: DEFAULT_NMAX,
        }
    }
}

impl TailOptions {
    pub fn with_tail(mut self, tail: TailStrategy) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_bm_depth(mut self, depth: usize) -> Self {
        self.bm_depth = depth;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_nmax(mut self, nmax: usize) -> Self {
        self.nmax = nmax;
        self
    }
}

/// The continued fraction `K_{k > start}(a_k / b_k)`. Its value `v` gives the
/// ratio `G_{0,start+1} / G_{0,start} = -v`.
pub fn ratio_fraction<O: JacobiOperator>(
    op: &O,
    e: EnergyPoint,
    start: usize,
) -> Result<ContinuedFraction> {
    op.check_energy(e.eps)?;
    let limits = op.limits(e.eps)?;
    let op = op.clone();
    let eps = e.eps;
    Ok(ContinuedFraction::new(
        Complex64::new(0.0, 0.0),
        move |n| {
            let i = start + n;
            Ok((op.cf_a(i, eps), op.cf_b(i, eps)))
        },
        Some(limits),
    ))
}

/// Fixed point of the tail on the requested sheet.
pub fn physical_tail<O: JacobiOperator>(op: &O, e: EnergyPoint, sheet: Sheet) -> Result<Complex64> {
    let (a, b) = op.limits(e.eps)?;
    let fp = fixed_points(a, b)?;
    if fp.degeneracy == Some(Degeneracy::DoubleRoot) {
        return Err(Error::DegenerateFixedPoints("double root"));
    }
    let physical = match op.physical_fixed_point(e) {
        Some(w) => w,
        None if fp.degeneracy == Some(Degeneracy::EqualModulus) => {
            sign_rule_root(op, e, fp.attractive, fp.repulsive)?
        }
        None => fp.attractive,
    };
    Ok(match sheet {
        Sheet::Physical => physical,
        // the product of the two roots is -a
        Sheet::Unphysical => -a / physical,
    })
}

/// Of two unimodular candidates pick the one giving `Im G_00 < 0`.
fn sign_rule_root<O: JacobiOperator>(
    op: &O,
    e: EnergyPoint,
    w1: Complex64,
    w2: Complex64,
) -> Result<Complex64> {
    let cf = ratio_fraction(op, e, 0)?;
    let (j00, j01) = (op.diag_c64(0, e.eps), op.offdiag_c64(0, e.eps));
    let g00 = |w| -> Result<Complex64> {
        let ratio = -approximant(&cf, 256, w)?;
        Ok(1.0 / (j00 + j01 * ratio))
    };
    if g00(w1)?.im < 0.0 {
        Ok(w1)
    } else {
        Ok(w2)
    }
}

/// The constant tail value a strategy resolves to at `e`.
pub fn resolve_tail<O: JacobiOperator>(op: &O, e: EnergyPoint, tail: TailStrategy) -> Result<Complex64> {
    match tail {
        TailStrategy::Zero => Ok(Complex64::new(0.0, 0.0)),
        TailStrategy::Explicit(w) => Ok(w),
        TailStrategy::FixedPointAttractive => physical_tail(op, e, Sheet::Physical),
        TailStrategy::FixedPointRepulsive => physical_tail(op, e, Sheet::Unphysical),
    }
}

/// Fraction for the ratio after `bm_depth` Bauer–Muir levels, and the tail
/// value to close it with.
pub fn accelerated_fraction<O: JacobiOperator>(
    op: &O,
    e: EnergyPoint,
    start: usize,
    tail: TailStrategy,
    bm_depth: usize,
) -> Result<(ContinuedFraction, Complex64)> {
    let cf = ratio_fraction(op, e, start)?;
    let w = resolve_tail(op, e, tail)?;
    let cf = bauer_muir_iterated(&cf, TailStrategy::Explicit(w), bm_depth)?;
    Ok((cf, w))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub ratio: Complex64,
    pub n_used: usize,
    pub converged: bool,
}

/// Unconverged evaluation of `G_{0,start+1} / G_{0,start}`.
pub fn tail_ratio_report<O: JacobiOperator>(
    op: &O,
    e: EnergyPoint,
    start: usize,
    opts: &TailOptions,
) -> Result<RatioReport> {
    let (cf, w) = accelerated_fraction(op, e, start, opts.tail, opts.bm_depth)?;
    let EvaluationReport {
        value,
        n_used,
        converged,
        ..
    } = evaluate(&cf, TailStrategy::Explicit(w), opts.tol, opts.nmax)?;
    Ok(RatioReport {
        ratio: -value,
        n_used,
        converged,
    })
}

/// `G_{0,start+1} / G_{0,start}` converged to `opts.tol`.
pub fn tail_ratio<O: JacobiOperator>(
    op: &O,
    e: EnergyPoint,
    start: usize,
    opts: &TailOptions,
) -> Result<Complex64> {
    let r = tail_ratio_report(op, e, start, opts)?;
    if !r.converged {
        return Err(Error::NonConvergence {
            what: "tail ratio continued fraction",
            terms: r.n_used,
            last: r.ratio,
        });
    }
    Ok(r.ratio)
}
