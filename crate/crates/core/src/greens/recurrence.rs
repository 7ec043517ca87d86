use num_complex::{Complex, Complex64};

use super::exact::ExactSeed;
use super::matrix::CMatrix;
use super::{Diagnostics, GreensMatrix, Method};
use crate::models::{EnergyPoint, JacobiOperator};
use crate::specfun::real::{cabs, from_c64, to_c64, DoubleDouble, Real};
use crate::{Error, Result};

/// Estimated relative error above which Method A reports instability.
pub const METHOD_A_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    DoubleDouble,
}

/// Raw Method-A fill. Column 0 runs forward from `G_00`; every other column
/// `j` runs forward in `i` from row 0, seeded with `G_{0j} = G_{j0}`. The upper
/// triangle is kept and mirrored.
///
/// The fill is affine in the seed, `G = P + G_00 Q`, and the forward
/// recurrence lets `Q` grow like the dominant solution. The returned residual
/// `u max |G_00 Q_ij| / |G_ij|` (u = unit roundoff) estimates the relative
/// error this amplifies out of the rounding of `G_00`; the row index of the
/// worst element comes with it.
pub fn recurrence_fill<T: Real, O: JacobiOperator>(
    op: &O,
    eps: Complex<T>,
    n: usize,
    g00: Complex<T>,
) -> Result<(Vec<Vec<Complex<T>>>, f64, usize)> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncation size N must be >= 1".into()));
    }
    let diag: Vec<Complex<T>> = (0..n).map(|i| op.diag(i, eps)).collect();
    let off: Vec<Complex<T>> = (0..n).map(|i| op.offdiag(i, eps)).collect();
    if n > 1 && off.iter().take(n - 1).any(|z| cabs(*z) == T::zero()) {
        return Err(Error::SingularEnergy(to_c64(eps)));
    }
    let g = fill(&diag, &off, g00);
    let doubled = fill(&diag, &off, g00 + g00);
    let mut worst = 0.0;
    let mut worst_row = 0;
    for i in 0..n {
        for j in i..n {
            let size = cabs(g[i][j]).to_f64();
            let swing = cabs(doubled[i][j] - g[i][j]).to_f64();
            let r = if size == 0.0 {
                if swing == 0.0 { 0.0 } else { f64::INFINITY }
            } else {
                T::UNIT_ROUNDOFF * swing / size
            };
            if !(r <= worst) {
                worst = r;
                worst_row = i;
            }
        }
    }
    Ok((g, worst, worst_row))
}

fn fill<T: Real>(diag: &[Complex<T>], off: &[Complex<T>], g00: Complex<T>) -> Vec<Vec<Complex<T>>> {
    let n = diag.len();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut g = vec![vec![zero; n]; n];
    g[0][0] = g00;
    for j in 0..n {
        if j > 0 {
            g[0][j] = g[j][0];
        }
        if n == 1 {
            break;
        }
        let delta0 = if j == 0 { one } else { zero };
        g[1][j] = (delta0 - diag[0] * g[0][j]) / off[0];
        for i in 1..n - 1 {
            let delta = if i == j { one } else { zero };
            g[i + 1][j] = (delta - off[i - 1] * g[i - 1][j] - diag[i] * g[i][j]) / off[i];
        }
    }
    for i in 0..n {
        for j in 0..i {
            g[i][j] = g[j][i];
        }
    }
    g
}

fn decoupled_diagonal<O: JacobiOperator>(op: &O, e: EnergyPoint, n: usize) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        let d = op.diag_c64(i, e.eps);
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::SingularMatrix { pivot: i });
        }
        m[(i, i)] = 1.0 / d;
    }
    Ok(m)
}

fn finish(values: CMatrix, e: EnergyPoint, residual: f64, row: usize) -> Result<GreensMatrix> {
    if !(residual <= METHOD_A_GUARD) {
        return Err(Error::Unstable { residual, row });
    }
    let n = values.dim();
    let ratio = if n >= 2 {
        values[(n - 1, 0)] / values[(n - 2, 0)]
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(GreensMatrix {
        values,
        ratio,
        energy: e,
        method: Method::A,
        diagnostics: Diagnostics {
            n_used: 0,
            converged: true,
            residual,
        },
    })
}

/// Method A in double precision from a given `G_00`.
pub fn greens_matrix_a<O: JacobiOperator>(
    op: &O,
    e: EnergyPoint,
    n: usize,
    g00: Complex64,
) -> Result<GreensMatrix> {
    if op.is_decoupled(e.eps) {
        return finish(decoupled_diagonal(op, e, n)?, e, 0.0, 0);
    }
    let (g, residual, row) = recurrence_fill::<f64, O>(op, e.eps, n, g00)?;
    finish(CMatrix::from_fn(n, |i, j| g[i][j]), e, residual, row)
}

/// Method A seeded with the model's closed-form `G_00`, at the requested
/// working precision.
pub fn greens_matrix_a_exact<M: ExactSeed>(
    m: &M,
    e: EnergyPoint,
    n: usize,
    precision: Precision,
) -> Result<GreensMatrix> {
    if m.is_decoupled(e.eps) {
        return finish(decoupled_diagonal(m, e, n)?, e, 0.0, 0);
    }
    match precision {
        Precision::Double => {
            let g00 = m.exact_g00::<f64>(e.eps)?;
            greens_matrix_a(m, e, n, g00)
        }
        Precision::DoubleDouble => {
            let eps: Complex<DoubleDouble> = from_c64(e.eps);
            let g00 = m.exact_g00(eps)?;
            let (g, residual, row) = recurrence_fill(m, eps, n, g00)?;
            finish(CMatrix::from_fn(n, |i, j| to_c64(g[i][j])), e, residual, row)
        }
    }
}

/// Method-A error estimate without the stability guard.
pub fn method_a_residual<M: ExactSeed>(m: &M, e: EnergyPoint, n: usize) -> Result<f64> {
    let g00 = m.exact_g00::<f64>(e.eps)?;
    Ok(recurrence_fill::<f64, M>(m, e.eps, n, g00)?.1)
}
