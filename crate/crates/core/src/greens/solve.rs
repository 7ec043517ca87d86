use num_complex::Complex64;

use super::matrix::{CMatrix, Tridiagonal};
use super::tail::{tail_ratio_report, TailOptions};
use super::{Diagnostics, GreensMatrix, Method};
use crate::models::{EnergyPoint, JacobiOperator};
use crate::{Error, Result};

const PIVOT_FLOOR: f64 = 1e-13;

/// The `n x n` block of `J` with the corner closed by the tail ratio:
/// `J_{n-1,n-1} + J_{n-1,n} * ratio`.
pub fn truncated_inverse<O: JacobiOperator>(
    op: &O,
    e: EnergyPoint,
    n: usize,
    ratio: Complex64,
) -> Result<Tridiagonal> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncation size N must be >= 1".into()));
    }
    let mut diag: Vec<Complex64> = (0..n).map(|i| op.diag_c64(i, e.eps)).collect();
    let off: Vec<Complex64> = (0..n - 1).map(|i| op.offdiag_c64(i, e.eps)).collect();
    diag[n - 1] += op.offdiag_c64(n - 1, e.eps) * ratio;
    Ok(Tridiagonal { diag, off })
}

/// Method B: truncated inverse closed by the continued-fraction tail ratio.
pub fn greens_matrix_b<O: JacobiOperator>(
    op: &O,
    e: EnergyPoint,
    n: usize,
    opts: &TailOptions,
) -> Result<GreensMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncation size N must be >= 1".into()));
    }
    let (ratio, n_used) = if op.is_decoupled(e.eps) {
        (Complex64::new(0.0, 0.0), 0)
    } else {
        let r = tail_ratio_report(op, e, n - 1, opts)?;
        if !r.converged {
            return Err(Error::NonConvergence {
                what: "tail ratio continued fraction",
                terms: r.n_used,
                last: r.ratio,
            });
        }
        (r.ratio, r.n_used)
    };
    let t = truncated_inverse(op, e, n, ratio)?;
    let values = invert_tridiagonal(&t)?;
    let residual = t.identity_residual(&values);
    Ok(GreensMatrix {
        values,
        ratio,
        energy: e,
        method: Method::B,
        diagnostics: Diagnostics {
            n_used,
            converged: true,
            residual,
        },
    })
}

/// `G_00` by Method B with `N = 1`.
pub fn g00_method_b<O: JacobiOperator>(op: &O, e: EnergyPoint, opts: &TailOptions) -> Result<Complex64> {
    Ok(greens_matrix_b(op, e, 1, opts)?.values[(0, 0)])
}

/// Inverse of a tridiagonal matrix, column by column. Falls back to dense LU
/// with partial pivoting when an elimination pivot is small against its row.
pub fn invert_tridiagonal(t: &Tridiagonal) -> Result<CMatrix> {
    match thomas_inverse(t) {
        Some(m) => Ok(m),
        None => dense_inverse(&t.to_dense()),
    }
}

fn thomas_inverse(t: &Tridiagonal) -> Option<CMatrix> {
    let n = t.dim();
    // LU without pivoting: pivots u_i and multipliers l_i = off_{i-1} / u_{i-1}
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut l = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut row = t.diag[i].norm();
        if i > 0 {
            row += t.off[i - 1].norm();
        }
        if i + 1 < n {
            row += t.off[i].norm();
        }
        u[i] = if i == 0 {
            t.diag[0]
        } else {
            l[i] = t.off[i - 1] / u[i - 1];
            t.diag[i] - l[i] * t.off[i - 1]
        };
        if !(u[i].norm() > PIVOT_FLOOR * row) {
            return None;
        }
    }
    let mut inv = CMatrix::zeros(n);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        // forward: L y = e_j, zero above j
        y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        y[j] = Complex64::new(1.0, 0.0);
        for i in j + 1..n {
            y[i] = -l[i] * y[i - 1];
        }
        // backward: U x = y
        let mut x = y[n - 1] / u[n - 1];
        inv[(n - 1, j)] = x;
        for i in (0..n - 1).rev() {
            x = (y[i] - t.off[i] * x) / u[i];
            inv[(i, j)] = x;
        }
    }
    Some(inv)
}

/// Dense inverse by LU with partial pivoting.
pub fn dense_inverse(a: &CMatrix) -> Result<CMatrix> {
    let n = a.dim();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| lu[(x, k)].norm().total_cmp(&lu[(y, k)].norm()))
            .unwrap_or(k);
        if lu[(p, k)].norm() == 0.0 {
            return Err(Error::SingularMatrix { pivot: k });
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            if f != Complex64::new(0.0, 0.0) {
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
    }
    let mut inv = CMatrix::zeros(n);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            let mut s = if perm[i] == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            for k in 0..i {
                s -= lu[(i, k)] * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= lu[(i, k)] * x[k];
            }
            x[i] = s / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, j)] = x[i];
        }
    }
    Ok(inv)
}
