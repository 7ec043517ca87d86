//! Green's matrices of Jacobi operators: Method B (continued-fraction tail and
//! truncated inverse) and Method A (closed-form `G_00` plus recurrence).

mod checks;
mod exact;
mod matrix;
mod poles;
mod recurrence;
mod solve;
mod tail;

pub use checks::{factorization_check, recurrence_residual, symmetry_error};
pub use exact::{exact_g00_c64, g00_coulomb_exact, g00_oscillator_exact, ExactSeed};
pub use matrix::{CMatrix, Tridiagonal};
pub use poles::find_g00_pole;
pub use recurrence::{
    greens_matrix_a, greens_matrix_a_exact, method_a_residual, recurrence_fill, Precision,
    METHOD_A_GUARD,
};
pub use solve::{dense_inverse, g00_method_b, greens_matrix_b, invert_tridiagonal, truncated_inverse};
pub use tail::{
    accelerated_fraction, physical_tail, ratio_fraction, resolve_tail, tail_ratio,
    tail_ratio_report, RatioReport, Sheet, TailOptions,
};

use num_complex::Complex64;

use crate::models::EnergyPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Continued-fraction depth used for the tail ratio (0 for Method A).
    pub n_used: usize,
    pub converged: bool,
    /// Method B: `max |T G - I|`. Method A: estimated relative error from
    /// rounding amplified by the forward recurrence.
    pub residual: f64,
}

/// Truncated `N x N` Green's matrix with the tail ratio that closed it.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensMatrix {
    pub values: CMatrix,
    /// `G_{N,0} / G_{N-1,0}` used at the corner.
    pub ratio: Complex64,
    pub energy: EnergyPoint,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl GreensMatrix {
    pub fn dim(&self) -> usize {
        self.values.dim()
    }

    pub fn g00(&self) -> Complex64 {
        self.values[(0, 0)]
    }
}
