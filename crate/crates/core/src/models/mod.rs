//! Model Hamiltonians with a Jacobi-matrix representation of `E - H`.

mod coulomb;
mod oscillator;

pub use coulomb::{
    coulomb_bound_wavefunction, coulomb_spectrum, cs_function, cs_overlap, ChargeTerm,
    CoulombModel,
};
pub use oscillator::{oscillator_spectrum, OscillatorModel};

use num_complex::{Complex, Complex64};

use crate::specfun::real::{from_c64, sqrt_upper, Real};
use crate::Result;

/// Energy together with its wave number `k = sqrt(eps)`, `Im k >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPoint {
    pub eps: Complex64,
    pub k: Complex64,
}

impl EnergyPoint {
    pub fn new(eps: Complex64) -> Self {
        Self {
            eps,
            k: sqrt_upper(eps),
        }
    }

    pub fn real(eps: f64) -> Self {
        Self::new(Complex64::new(eps, 0.0))
    }
}

impl From<Complex64> for EnergyPoint {
    fn from(eps: Complex64) -> Self {
        Self::new(eps)
    }
}

/// Symmetric tridiagonal matrix `J(eps)` of `E - H` in some basis.
///
/// `diag` and `offdiag` are generic over the scalar so the recurrence can run
/// in extended precision.
pub trait JacobiOperator: Clone + Send + Sync + 'static {
    /// `J_ii(eps)`.
    fn diag<T: Real>(&self, i: usize, eps: Complex<T>) -> Complex<T>;

    /// `J_{i,i+1}(eps) = J_{i+1,i}(eps)`.
    fn offdiag<T: Real>(&self, i: usize, eps: Complex<T>) -> Complex<T>;

    /// Error if the continued-fraction coefficients are undefined at `eps`.
    fn check_energy(&self, eps: Complex64) -> Result<()>;

    /// True if `J_{i,i+1}` vanishes identically at `eps` (decoupled basis).
    fn is_decoupled(&self, eps: Complex64) -> bool;

    /// `lim a_i` and `lim b_i`.
    fn limits(&self, eps: Complex64) -> Result<(Complex64, Complex64)>;

    /// Closed-form physical-sheet fixed point, when the model has one.
    fn physical_fixed_point(&self, _e: EnergyPoint) -> Option<Complex64> {
        None
    }

    /// `a_i = -J_{i,i-1} / J_{i,i+1}`, `i >= 1`.
    fn cf_a(&self, i: usize, eps: Complex64) -> Complex64 {
        -self.offdiag(i - 1, eps) / self.offdiag(i, eps)
    }

    /// `b_i = -J_ii / J_{i,i+1}`.
    fn cf_b(&self, i: usize, eps: Complex64) -> Complex64 {
        -self.diag(i, eps) / self.offdiag(i, eps)
    }

    fn diag_c64(&self, i: usize, eps: Complex64) -> Complex64 {
        self.diag(i, eps)
    }

    fn offdiag_c64(&self, i: usize, eps: Complex64) -> Complex64 {
        self.offdiag(i, eps)
    }
}

pub(crate) fn c<T: Real>(x: f64) -> Complex<T> {
    from_c64(Complex64::new(x, 0.0))
}
