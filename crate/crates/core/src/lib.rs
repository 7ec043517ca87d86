//! Green's (resolvent) matrices `G(E) = (E - H)^-1` for Hamiltonians that are
//! symmetric tridiagonal (Jacobi) matrices in some discrete basis.
//!
//! Two constructions are provided:
//!
//! * **Method B** closes a truncated `N x N` block of the Jacobi matrix with the
//!   ratio `G_{0,N}/G_{0,N-1}`, obtained from a continued fraction. Fixed-point
//!   tails continue the fraction analytically across the scattering cut and the
//!   Bauer–Muir transformation accelerates it there.
//! * **Method A** seeds the three-term recurrence with a closed-form `G_00`.
//!   It is used as an independent cross-check.
//!
//! Two model operators ship with the crate: the D-dimensional Coulomb problem in
//! the Coulomb–Sturmian basis and the D-dimensional harmonic oscillator on a
//! basis of different frequency.

pub mod cfkernel;
pub mod error;
pub mod greens;
pub mod models;
pub mod specfun;
pub mod validate;

pub use error::{Error, Result};

pub use num_complex::Complex64;
