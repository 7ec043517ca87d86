use super::solve::g00_method_b;
use super::tail::TailOptions;
use crate::models::{EnergyPoint, JacobiOperator};
use crate::{Error, Result};

/// Real root of `Re 1/G_00` (Method B) near `guess`. `scale` is the distance
/// to the nearest other level; brackets up to `0.45 * scale` are tried.
pub fn find_g00_pole<O: JacobiOperator>(
    op: &O,
    guess: f64,
    scale: f64,
    opts: &TailOptions,
) -> Result<f64> {
    let f = |x: f64| -> Result<f64> {
        let g = g00_method_b(op, EnergyPoint::real(x), opts);
        match g {
            Ok(g) => Ok((1.0 / g).re),
            // exactly on a pole of the truncated block
            Err(Error::SingularMatrix { .. }) => Ok(0.0),
            Err(e) => Err(e),
        }
    };
    let f0 = f(guess)?;
    if f0 == 0.0 {
        return Ok(guess);
    }
    for frac in [1e-4, 1e-3, 1e-2, 0.05, 0.15, 0.3, 0.45] {
        let h = frac * scale;
        let (lo, hi) = (guess - h, guess + h);
        let (flo, fhi) = (f(lo)?, f(hi)?);
        if flo == 0.0 {
            return Ok(lo);
        }
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo.signum() != fhi.signum() {
            let root = illinois(&f, lo, hi, flo, fhi)?;
            // a sign change through a zero of G_00 is not a pole
            let froot = f(root)?.abs();
            if froot <= 1e-6 * flo.abs().max(fhi.abs()) {
                return Ok(root);
            }
        }
    }
    Err(Error::RootNotFound(format!("no pole of G_00 near {guess}")))
}

fn illinois<F: Fn(f64) -> Result<f64>>(
    f: &F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
) -> Result<f64> {
    let mut side = 0;
    let mut prev = f64::NAN;
    for _ in 0..300 {
        let x = (a * fb - b * fa) / (fb - fa);
        let fx = f(x)?;
        let tiny = 4.0 * f64::EPSILON * x.abs().max(1e-300);
        if fx == 0.0 || (b - a).abs() <= tiny || (x - prev).abs() <= tiny {
            return Ok(x);
        }
        prev = x;
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok((a * fb - b * fa) / (fb - fa))
}
