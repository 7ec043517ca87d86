//! Special functions and quadrature used by the closed-form seeds and the
//! validation oracles.

mod gamma;
mod hypergeometric;
mod laguerre;
mod quadrature;
pub mod real;

pub use gamma::{ln_gamma_real, log_gamma};
pub use hypergeometric::{hyp2f1, hyp2f1_b1, hyp2f1_c64, HYP2F1_NMAX};
pub use laguerre::laguerre;
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use real::{DoubleDouble, Real};
