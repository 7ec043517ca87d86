use num_complex::{Complex, Complex64};

use super::{c, EnergyPoint, JacobiOperator};
use crate::specfun::real::Real;
use crate::specfun::{laguerre, ln_gamma_real};
use crate::{Error, Result};

/// Sign of the charge term in `J_ii`. `Printed` flips it and exists only as a
/// negative control for the pole-matching checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChargeTerm {
    #[default]
    Derived,
    Printed,
}

/// D-dimensional Coulomb problem in the Coulomb–Sturmian basis, in scaled
/// units `eps = 2mE/hbar^2`, `zp = 2mZ/hbar^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombModel {
    pub dim: u32,
    pub l: u32,
    pub zp: f64,
    pub bs: f64,
    pub charge_term: ChargeTerm,
}

impl CoulombModel {
    pub fn new(dim: u32, l: u32, zp: f64, bs: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("D = {dim} must be >= 2")));
        }
        if !(bs.is_finite() && bs > 0.0) {
            return Err(Error::InvalidParameter(format!("bS = {bs} must be positive")));
        }
        if !zp.is_finite() {
            return Err(Error::InvalidParameter(format!("Z' = {zp} must be finite")));
        }
        Ok(Self {
            dim,
            l,
            zp,
            bs,
            charge_term: ChargeTerm::Derived,
        })
    }

    pub fn with_charge_term(mut self, t: ChargeTerm) -> Self {
        self.charge_term = t;
        self
    }

    /// `l' = l + (D-3)/2`.
    pub fn l_prime(&self) -> f64 {
        self.l as f64 + (self.dim as f64 - 3.0) / 2.0
    }

    /// `l + (D-1)/2`.
    pub fn nu0(&self) -> f64 {
        self.l as f64 + (self.dim as f64 - 1.0) / 2.0
    }

    fn signed_charge(&self) -> f64 {
        match self.charge_term {
            ChargeTerm::Derived => self.zp,
            ChargeTerm::Printed => -self.zp,
        }
    }

    fn near_singular(&self, eps: Complex64) -> bool {
        let b2 = self.bs * self.bs;
        (eps + b2).norm() <= 1e-12 * (eps.norm() + b2)
    }
}

impl JacobiOperator for CoulombModel {
    fn diag<T: Real>(&self, i: usize, eps: Complex<T>) -> Complex<T> {
        let bs = T::from_f64(self.bs);
        let n = T::from_usize(i) + T::from_f64(self.l_prime() + 1.0);
        (eps - c::<T>(self.bs * self.bs)) * n / bs + c::<T>(self.signed_charge())
    }

    fn offdiag<T: Real>(&self, i: usize, eps: Complex<T>) -> Complex<T> {
        let bs = T::from_f64(self.bs);
        let n = T::from_usize(i);
        let root = ((n + T::one()) * (n + T::from_f64(2.0 * self.l_prime() + 2.0))).sqrt();
        -(eps + c::<T>(self.bs * self.bs)) * root / (T::from_f64(2.0) * bs)
    }

    fn check_energy(&self, eps: Complex64) -> Result<()> {
        if !(eps.re.is_finite() && eps.im.is_finite()) || self.near_singular(eps) {
            return Err(Error::SingularEnergy(eps));
        }
        Ok(())
    }

    fn is_decoupled(&self, eps: Complex64) -> bool {
        self.near_singular(eps)
    }

    fn limits(&self, eps: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_energy(eps)?;
        let b2 = self.bs * self.bs;
        Ok((Complex64::new(-1.0, 0.0), 2.0 * (eps - b2) / (eps + b2)))
    }

    fn physical_fixed_point(&self, e: EnergyPoint) -> Option<Complex64> {
        let ib = Complex64::new(0.0, self.bs);
        Some(-(e.k - ib) / (e.k + ib))
    }
}

/// Bound-state energy `eps_nr = -zp^2 / (4 (nr + l + (D-1)/2)^2)`.
pub fn coulomb_spectrum(m: &CoulombModel, nr: usize) -> Result<f64> {
    if m.zp <= 0.0 {
        return Err(Error::NoBoundStates);
    }
    let nu = nr as f64 + m.nu0();
    Ok(-m.zp * m.zp / (4.0 * nu * nu))
}

/// `<n l | n' l>` of two Coulomb–Sturmian functions.
pub fn cs_overlap(n: usize, np: usize, m: &CoulombModel) -> f64 {
    let s = 2.0 * m.l as f64 + m.dim as f64;
    let scale = 1.0 / (2.0 * m.bs);
    if n == np {
        scale * (2.0 * n as f64 + s - 1.0)
    } else if n.abs_diff(np) == 1 {
        let lo = n.min(np) as f64;
        -scale * ((lo + 1.0) * (lo + s - 1.0)).sqrt()
    } else {
        0.0
    }
}

/// Coulomb–Sturmian function `phi_nl(bS, r)`.
pub fn cs_function(n: usize, m: &CoulombModel, r: f64) -> f64 {
    let alpha = 2.0 * m.l as f64 + m.dim as f64 - 2.0;
    let x = 2.0 * m.bs * r;
    let ln_norm = 0.5 * (ln_gamma(n as f64 + 1.0) - ln_gamma(n as f64 + alpha + 1.0));
    (ln_norm - m.bs * r + m.nu0() * x.ln()).exp() * laguerre(n, alpha, x)
}

/// Normalized bound-state radial function `psi_{nr l}(r)`.
pub fn coulomb_bound_wavefunction(nr: usize, m: &CoulombModel, r: f64) -> Result<f64> {
    if m.zp <= 0.0 {
        return Err(Error::NoBoundStates);
    }
    let alpha = 2.0 * m.l as f64 + m.dim as f64 - 2.0;
    let r0 = 1.0 / m.zp;
    let a0 = 1.0 / ((nr as f64 + m.nu0()) * r0);
    let x = a0 * r;
    let ln_norm = 0.5 * ((r0 / 2.0).ln() + ln_gamma(nr as f64 + 1.0) - ln_gamma(nr as f64 + alpha + 1.0));
    Ok(a0 * (ln_norm - x / 2.0 + m.nu0() * x.ln()).exp() * laguerre(nr, alpha, x))
}

fn ln_gamma(x: f64) -> f64 {
    // arguments here are >= 1 by construction
    ln_gamma_real(x).unwrap_or(f64::NAN)
}
