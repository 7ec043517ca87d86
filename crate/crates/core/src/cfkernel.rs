//! Continued fractions `b0 + K(a_n / b_n)`: modified approximants with an
//! arbitrary tail, fixed points of limit 1-periodic fractions and the
//! Bauer–Muir transformation.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::{Error, Result};

type CoeffFn = dyn Fn(usize) -> Result<(Complex64, Complex64)> + Send + Sync;

pub const DEFAULT_TOL: f64 = 1e-14;
pub const DEFAULT_NMAX: usize = 100_000;

/// `b0 + a1/(b1 + a2/(b2 + ...))` with lazily generated coefficients.
#[derive(Clone)]
pub struct ContinuedFraction {
    pub b0: Complex64,
    coeff: Arc<CoeffFn>,
    pub limits: Option<(Complex64, Complex64)>,
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuedFraction")
            .field("b0", &self.b0)
            .field("limits", &self.limits)
            .finish_non_exhaustive()
    }
}

impl ContinuedFraction {
    /// `coeff(n)` returns `(a_n, b_n)` for `n >= 1`.
    pub fn new<F>(b0: Complex64, coeff: F, limits: Option<(Complex64, Complex64)>) -> Self
    where
        F: Fn(usize) -> Result<(Complex64, Complex64)> + Send + Sync + 'static,
    {
        Self {
            b0,
            coeff: Arc::new(coeff),
            limits,
        }
    }

    /// Periodic fraction with `a_n = a`, `b_n = b` for every `n`.
    pub fn constant(b0: Complex64, a: Complex64, b: Complex64) -> Self {
        Self::new(b0, move |_| Ok((a, b)), Some((a, b)))
    }

    /// `(a_n, b_n)`, with `a_n = 0` reported as an error.
    pub fn coefficients(&self, n: usize) -> Result<(Complex64, Complex64)> {
        debug_assert!(n >= 1);
        let (a, b) = (self.coeff)(n)?;
        if a == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroCoefficient { index: n });
        }
        Ok((a, b))
    }

    /// Spot check that the coefficients approach the declared limits: the
    /// distance at `n = 10^4` must be below `tol` and not larger than at `10^3`.
    pub fn check_limits(&self, tol: f64) -> Result<()> {
        let (a, b) = self.limits.ok_or(Error::MissingLimits)?;
        let dist = |n| -> Result<f64> {
            let (an, bn) = self.coefficients(n)?;
            Ok((an - a).norm().max((bn - b).norm()))
        };
        let (d3, d4) = (dist(1_000)?, dist(10_000)?);
        if d4 > tol || d4 > d3 {
            return Err(Error::InvalidParameter(format!(
                "coefficients do not approach their limits: {d3:e} at 1e3, {d4:e} at 1e4"
            )));
        }
        Ok(())
    }
}

/// How the fraction is closed at depth `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailStrategy {
    Zero,
    FixedPointAttractive,
    FixedPointRepulsive,
    Explicit(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub value: Complex64,
    pub n_used: usize,
    pub converged: bool,
    pub history: Vec<(usize, Complex64)>,
}

/// Modified approximant `S_n(w)`, evaluated backward from depth `n`.
pub fn approximant(cf: &ContinuedFraction, n: usize, w: Complex64) -> Result<Complex64> {
    let mut t = w;
    for k in (1..=n).rev() {
        let (a, b) = cf.coefficients(k)?;
        let d = b + t;
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::DivisionByZero { depth: k });
        }
        t = a / d;
    }
    Ok(cf.b0 + t)
}

/// `S_1(w), ..., S_n(w)`, each evaluated backward.
pub fn approximants(cf: &ContinuedFraction, n: usize, w: Complex64) -> Vec<Result<Complex64>> {
    (1..=n).map(|k| approximant(cf, k, w)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    DoubleRoot,
    EqualModulus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoints {
    /// Smaller-modulus root of `w^2 + b w - a = 0`.
    pub attractive: Complex64,
    pub repulsive: Complex64,
    pub degeneracy: Option<Degeneracy>,
}

impl FixedPoints {
    /// Attractive root, or an error if the ordering is not decidable.
    pub fn require_attractive(&self) -> Result<Complex64> {
        match self.degeneracy {
            None => Ok(self.attractive),
            Some(d) => Err(degenerate_error(d)),
        }
    }

    pub fn require_repulsive(&self) -> Result<Complex64> {
        match self.degeneracy {
            None => Ok(self.repulsive),
            Some(d) => Err(degenerate_error(d)),
        }
    }
}

fn degenerate_error(d: Degeneracy) -> Error {
    match d {
        Degeneracy::DoubleRoot => Error::DegenerateFixedPoints("double root"),
        Degeneracy::EqualModulus => Error::DegenerateFixedPoints("roots of equal modulus"),
    }
}

/// Fixed points of `w -> a/(b + w)`, i.e. the roots of `w^2 + b w - a = 0`.
pub fn fixed_points(a: Complex64, b: Complex64) -> Result<FixedPoints> {
    let zero = Complex64::new(0.0, 0.0);
    if a == zero && b == zero {
        return Err(Error::InvalidParameter("fixed points of a = b = 0".into()));
    }
    let disc = b * b + 4.0 * a;
    let s = disc.sqrt();
    // pick the sign that avoids cancellation, then use the product of roots
    let sum = if (b.conj() * s).re >= 0.0 { b + s } else { b - s };
    let w1 = -0.5 * sum;
    let w2 = if w1 == zero { -b - w1 } else { -a / w1 };
    let (m1, m2) = (w1.norm(), w2.norm());
    let scale = a.norm() + b.norm_sqr();
    let degeneracy = if disc.norm() <= 1e-14 * scale {
        Some(Degeneracy::DoubleRoot)
    } else if (m1 - m2).abs() <= 1e-12 * m1.max(m2) {
        Some(Degeneracy::EqualModulus)
    } else {
        None
    };
    let (attractive, repulsive) = if m1 <= m2 { (w1, w2) } else { (w2, w1) };
    Ok(FixedPoints {
        attractive,
        repulsive,
        degeneracy,
    })
}

/// The constant tail value a strategy stands for.
pub fn tail_value(cf: &ContinuedFraction, tail: TailStrategy) -> Result<Complex64> {
    match tail {
        TailStrategy::Zero => Ok(Complex64::new(0.0, 0.0)),
        TailStrategy::Explicit(w) => Ok(w),
        TailStrategy::FixedPointAttractive => {
            let (a, b) = cf.limits.ok_or(Error::MissingLimits)?;
            fixed_points(a, b)?.require_attractive()
        }
        TailStrategy::FixedPointRepulsive => {
            let (a, b) = cf.limits.ok_or(Error::MissingLimits)?;
            fixed_points(a, b)?.require_repulsive()
        }
    }
}

/// Evaluate with the default history-free report.
pub fn evaluate(
    cf: &ContinuedFraction,
    tail: TailStrategy,
    tol: f64,
    nmax: usize,
) -> Result<EvaluationReport> {
    evaluate_with_history(cf, tail, tol, nmax, 0)
}

/// Increase `n` until `|S_n - S_{n-1}| <= tol |S_n|` holds at two consecutive
/// depths. Depths are scanned with the forward Wallis recurrence and the
/// reported value is recomputed backward at `n_used`. `stride > 0` records
/// every `stride`-th approximant in the history.
pub fn evaluate_with_history(
    cf: &ContinuedFraction,
    tail: TailStrategy,
    tol: f64,
    nmax: usize,
    stride: usize,
) -> Result<EvaluationReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be positive")));
    }
    if nmax < 2 {
        return Err(Error::InvalidParameter(format!("nmax = {nmax} must be >= 2")));
    }
    let w = tail_value(cf, tail)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    // A_{-1}, A_0, B_{-1}, B_0
    let (mut a_prev, mut a_cur) = (one, cf.b0);
    let (mut b_prev, mut b_cur) = (zero, one);
    let mut history = Vec::new();
    let mut last: Option<Complex64> = None;
    let mut run = 0;
    let mut n_used = nmax;
    let mut converged = false;

    for n in 1..=nmax {
        let (an, bn) = cf.coefficients(n)?;
        let a_next = bn * a_cur + an * a_prev;
        let b_next = bn * b_cur + an * b_prev;
        a_prev = a_cur;
        a_cur = a_next;
        b_prev = b_cur;
        b_cur = b_next;

        let big = a_cur
            .norm()
            .max(b_cur.norm())
            .max(a_prev.norm())
            .max(b_prev.norm());
        if big > 1e150 || (big < 1e-150 && big > 0.0) {
            let s = 1.0 / big;
            a_prev *= s;
            a_cur *= s;
            b_prev *= s;
            b_cur *= s;
        }

        let den = b_cur + w * b_prev;
        let s_n = if den == zero {
            None
        } else {
            Some((a_cur + w * a_prev) / den)
        };
        if stride > 0 && n % stride == 0 {
            if let Some(v) = s_n {
                history.push((n, v));
            }
        }
        match (s_n, last) {
            (Some(v), Some(p)) if v.is_finite() && (v - p).norm() <= tol * v.norm() => {
                run += 1;
            }
            _ => run = 0,
        }
        last = s_n;
        if run >= 2 {
            n_used = n;
            converged = true;
            break;
        }
    }

    let value = match approximant(cf, n_used, w) {
        Ok(v) => v,
        // the forward value is the only one available at a backward breakdown
        Err(Error::DivisionByZero { .. }) if !converged => last.unwrap_or(zero),
        Err(e) => return Err(e),
    };
    Ok(EvaluationReport {
        value,
        n_used,
        converged,
        history,
    })
}

/// Bauer–Muir transform with respect to the sequence `w(0), w(1), ...`.
///
/// The classical approximants of the result equal the modified approximants
/// `S_n(w_n)` of `cf`. The limits are carried over unchanged, which holds when
/// `lambda_{i+1}/lambda_i -> 1`.
pub fn bauer_muir<W>(cf: &ContinuedFraction, w: W) -> ContinuedFraction
where
    W: Fn(usize) -> Complex64 + Send + Sync + 'static,
{
    let b0 = cf.b0 + w(0);
    let limits = cf.limits;
    let level = BauerMuirLevel {
        inner: cf.clone(),
        w,
        recent: Mutex::new(Vec::with_capacity(RECENT)),
    };
    ContinuedFraction::new(b0, move |i| level.coefficients(i), limits)
}

const RECENT: usize = 4;

/// One transformation level. Each output coefficient needs the input at `i`
/// and `i - 1`; the last few inputs are kept so that stacked levels cost
/// O(depth) per coefficient rather than O(2^depth).
struct BauerMuirLevel<W> {
    inner: ContinuedFraction,
    w: W,
    recent: Mutex<Vec<(usize, Complex64, Complex64, Complex64)>>,
}

impl<W: Fn(usize) -> Complex64> BauerMuirLevel<W> {
    /// `(a_i, b_i, lambda_i)` of the input fraction.
    fn input(&self, i: usize) -> Result<(Complex64, Complex64, Complex64)> {
        if let Ok(recent) = self.recent.lock() {
            if let Some(&(_, a, b, l)) = recent.iter().find(|r| r.0 == i) {
                return Ok((a, b, l));
            }
        }
        let (a, b) = self.inner.coefficients(i)?;
        let l = a - (self.w)(i - 1) * (b + (self.w)(i));
        if let Ok(mut recent) = self.recent.lock() {
            if recent.len() == RECENT {
                recent.remove(0);
            }
            recent.push((i, a, b, l));
        }
        Ok((a, b, l))
    }

    fn coefficients(&self, i: usize) -> Result<(Complex64, Complex64)> {
        let zero = Complex64::new(0.0, 0.0);
        let (_, b, l) = self.input(i)?;
        if l == zero {
            return Err(Error::TransformUndefined { index: i });
        }
        if i == 1 {
            return Ok((l, b + (self.w)(1)));
        }
        let (a_prev, _, l_prev) = self.input(i - 1)?;
        if l_prev == zero {
            return Err(Error::TransformUndefined { index: i - 1 });
        }
        let q = l / l_prev;
        Ok((a_prev * q, b + (self.w)(i) - (self.w)(i - 2) * q))
    }
}

/// `depth` successive Bauer–Muir transforms, each with the constant sequence
/// given by `tail` applied to the current level's limits.
pub fn bauer_muir_iterated(
    cf: &ContinuedFraction,
    tail: TailStrategy,
    depth: usize,
) -> Result<ContinuedFraction> {
    let mut out = cf.clone();
    for _ in 0..depth {
        let w = tail_value(&out, tail)?;
        out = bauer_muir(&out, move |_| w);
    }
    Ok(out)
}
