use num_complex::{Complex, Complex64};

use super::gamma::log_gamma;
use super::real::{cabs, to_c64, Real};
use crate::{Error, Result};

pub const HYP2F1_NMAX: usize = 1_000_000;

/// Gauss hypergeometric function ₂F₁(a, b; c; z) by its power series.
///
/// Valid for |z| < 1, and on |z| = 1 when Re(c − a − b) > 0. The series is
/// summed with the term-ratio recursion until two consecutive terms are below
/// `T::SERIES_TOL` relative to the partial sum.
pub fn hyp2f1<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let cf = to_c64(c);
    if cf.im == 0.0 && cf.re <= 0.0 && cf.re == cf.re.round() {
        return Err(Error::Domain {
            function: "hyp2f1",
            reason: format!("c = {cf} is a non-positive integer"),
        });
    }
    let rz = cabs(z).to_f64();
    if !rz.is_finite() || rz > 1.0 + 1e-14 {
        return Err(Error::Domain {
            function: "hyp2f1",
            reason: format!("|z| = {rz} outside the unit disc"),
        });
    }
    if rz >= 1.0 - 1e-14 {
        let s = to_c64(c - a - b).re;
        if s <= 0.0 {
            return Err(Error::Domain {
                function: "hyp2f1",
                reason: format!("|z| = 1 with Re(c-a-b) = {s} is not convergent"),
            });
        }
    }

    let tol = T::from_f64(T::SERIES_TOL);
    let mut term = one;
    let mut sum = one;
    let mut small_run = 0;
    for n in 0..HYP2F1_NMAX {
        let nn = T::from_usize(n);
        let nc = Complex::new(nn, T::zero());
        let denom = (c + nc) * (nn + T::one());
        term = term * (a + nc) * (b + nc) / denom * z;
        sum = sum + term;
        if cabs(term) == T::zero() {
            // a or b is a non-positive integer: the series terminates
            return Ok(sum);
        }
        if cabs(term) <= tol * cabs(sum) {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "hyp2f1 series",
        terms: HYP2F1_NMAX,
        last: to_c64(sum),
    })
}

/// Double-precision entry point. At exactly z = 1 the series tail decays only
/// like n^-(1+Re(c-a-b)), so the Gauss summation value is returned instead.
pub fn hyp2f1_c64(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(1.0, 0.0) {
        let s = c - a - b;
        if s.re <= 0.0 {
            return Err(Error::Domain {
                function: "hyp2f1",
                reason: format!("z = 1 with Re(c-a-b) = {} is not convergent", s.re),
            });
        }
        // a vanishing 1/Γ(c−a) or 1/Γ(c−b) makes the sum exactly zero
        for d in [c - a, c - b] {
            if d.im == 0.0 && d.re <= 0.0 && d.re == d.re.round() {
                return Ok(Complex64::new(0.0, 0.0));
            }
        }
        let ln = log_gamma(c)? + log_gamma(s)? - log_gamma(c - a)? - log_gamma(c - b)?;
        return Ok(ln.exp());
    }
    hyp2f1::<f64>(a, b, c, z)
}

/// ₂F₁(a, 1; c; z) on the whole cut plane `z ∉ [1, ∞)`.
///
/// Inside |z| <= 1/2 this is the power series. Elsewhere it is Gauss's
/// continued fraction `1 / (1 - k1 z / (1 - k2 z / ...))` with
/// `k_{2m+1} = (a+m)(c-1+m) / ((c-1+2m)(c+2m))` and
/// `k_{2m} = m(c-1+m-a) / ((c+2m-2)(c+2m-1))`, evaluated by modified Lentz.
/// It converges geometrically away from the cut, in particular on |z| = 1.
pub fn hyp2f1_b1<T: Real>(a: Complex<T>, c: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    if cabs(z).to_f64() <= 0.5 {
        return hyp2f1(a, one, c, z);
    }
    let zf = to_c64(z);
    let cf = to_c64(c);
    if zf.im == 0.0 && zf.re >= 1.0 {
        return Err(Error::Domain {
            function: "hyp2f1",
            reason: format!("z = {zf} lies on the branch cut"),
        });
    }
    if cf.im == 0.0 && cf.re <= 0.0 && cf.re == cf.re.round() {
        return Err(Error::Domain {
            function: "hyp2f1",
            reason: format!("c = {cf} is a non-positive integer"),
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let tiny = Complex::new(T::from_f64(1e-300), T::zero());
    let tol = T::from_f64(T::SERIES_TOL);
    let k = |n: usize| -> Complex<T> {
        let m = Complex::new(T::from_usize(n / 2), T::zero());
        let two_m = m + m;
        if n % 2 == 1 {
            (a + m) * (c - one + m) / ((c - one + two_m) * (c + two_m))
        } else {
            m * (c - one + m - a) / ((c + two_m - one - one) * (c + two_m - one))
        }
    };
    // Lentz for 1 + K(-k_n z / 1)
    let (mut f, mut cc, mut d) = (one, one, zero);
    let mut small_run = 0;
    for n in 1..HYP2F1_NMAX {
        let an = -k(n) * z;
        if an == zero {
            // a = -m: the fraction terminates
            return Ok(one / f);
        }
        d = one + an * d;
        if d == zero {
            d = tiny;
        }
        cc = one + an / cc;
        if cc == zero {
            cc = tiny;
        }
        d = one / d;
        let delta = cc * d;
        f = f * delta;
        if cabs(delta - one) <= tol {
            small_run += 1;
            if small_run >= 2 {
                return Ok(one / f);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "hyp2f1 continued fraction",
        terms: HYP2F1_NMAX,
        last: to_c64(one / f),
    })
}
