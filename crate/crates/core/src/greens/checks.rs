use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::models::{EnergyPoint, JacobiOperator};

/// `max |G_ij - G_ji| / max |G|`.
pub fn symmetry_error(g: &CMatrix) -> f64 {
    let n = g.dim();
    let scale = g.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((g[(i, j)] - g[(j, i)]).norm());
        }
    }
    worst / scale
}

/// Largest `|G_ij G_kl - G_il G_kj|` over `i, k <= min(j, l)`, divided by
/// `max |G|^2`. Zero for the inverse of any Jacobi matrix.
pub fn factorization_check(g: &CMatrix) -> f64 {
    let n = g.dim();
    let scale = g.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for l in j..n {
            // i, k <= j = min(j, l); the pair (j, l) and (l, j) give the same set
            for i in 0..=j {
                for k in 0..=j {
                    let d = g[(i, j)] * g[(k, l)] - g[(i, l)] * g[(k, j)];
                    worst = worst.max(d.norm());
                }
            }
        }
    }
    worst / (scale * scale)
}

/// Interior residual of `J G = I`:
/// `|J_{i,i-1} G_{i-1,j} + J_ii G_ij + J_{i,i+1} G_{i+1,j} - delta_ij|` for
/// `1 <= i <= N-2`, each relative to `max(1, sum of |terms|)`.
pub fn recurrence_residual<O: JacobiOperator>(op: &O, e: EnergyPoint, g: &CMatrix) -> f64 {
    let n = g.dim();
    let mut worst: f64 = 0.0;
    for i in 1..n.saturating_sub(1) {
        let (lo, d, hi) = (
            op.offdiag_c64(i - 1, e.eps),
            op.diag_c64(i, e.eps),
            op.offdiag_c64(i, e.eps),
        );
        for j in 0..n {
            let terms = [lo * g[(i - 1, j)], d * g[(i, j)], hi * g[(i + 1, j)]];
            let mut s: Complex64 = terms.iter().sum();
            if i == j {
                s -= 1.0;
            }
            let size: f64 = terms.iter().map(|t| t.norm()).sum();
            worst = worst.max(s.norm() / size.max(1.0));
        }
    }
    worst
}
