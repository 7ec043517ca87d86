use num_complex::{Complex, Complex64};

use crate::models::{CoulombModel, JacobiOperator, OscillatorModel};
use crate::specfun::hyp2f1_b1;
use crate::specfun::real::{cabs, from_c64, sqrt_upper, to_c64, Real};
use crate::{Error, Result};

/// Models with a closed-form `G_00`.
pub trait ExactSeed: JacobiOperator {
    fn exact_g00<T: Real>(&self, eps: Complex<T>) -> Result<Complex<T>>;
}

impl ExactSeed for CoulombModel {
    fn exact_g00<T: Real>(&self, eps: Complex<T>) -> Result<Complex<T>> {
        g00_coulomb_exact(self, eps)
    }
}

impl ExactSeed for OscillatorModel {
    fn exact_g00<T: Real>(&self, eps: Complex<T>) -> Result<Complex<T>> {
        g00_oscillator_exact(self, eps)
    }
}

fn re<T: Real>(x: f64) -> Complex<T> {
    Complex::new(T::from_f64(x), T::zero())
}

fn pole_guard<T: Real>(g: Complex<T>, eps: Complex<T>) -> Result<Complex<T>> {
    let inv = cabs(g).to_f64();
    if !inv.is_finite() || 1.0 / inv < 1e-12 {
        return Err(Error::SingularEnergy(to_c64(eps)));
    }
    Ok(g)
}

/// Closed-form `G_00(eps)` of the Coulomb model (scaled units), with
/// `gamma = -zp / (2k)` and `Im k >= 0`.
pub fn g00_coulomb_exact<T: Real>(m: &CoulombModel, eps: Complex<T>) -> Result<Complex<T>> {
    let k = sqrt_upper(eps);
    if cabs(k) == T::zero() {
        return Err(Error::SingularEnergy(to_c64(eps)));
    }
    let i = Complex::new(T::zero(), T::one());
    let bs = re::<T>(m.bs);
    let igamma = i * re::<T>(-m.zp / 2.0) / k;
    let nu = m.nu0();
    let a = re::<T>(-m.l_prime()) + igamma;
    let c = re::<T>(nu + 1.0) + igamma;
    let ik = i * k;
    let ratio = (bs + ik) / (bs - ik);
    let head = re::<T>(nu) + igamma;
    if cabs(head) == T::zero() {
        return Err(Error::SingularEnergy(to_c64(eps)));
    }
    let f = hyp2f1_b1(a, c, ratio * ratio).map_err(|e| match e {
        Error::Domain { .. } => Error::SingularEnergy(to_c64(eps)),
        other => other,
    })?;
    let pre = re::<T>(-2.0 * m.bs) / ((bs - ik) * (bs - ik));
    pole_guard(pre / head * f, eps)
}

/// Closed-form `G_00(E)` of the oscillator on a basis of frequency `omega_p`.
pub fn g00_oscillator_exact<T: Real>(m: &OscillatorModel, e: Complex<T>) -> Result<Complex<T>> {
    let e0 = re::<T>(m.omega * m.nu0());
    if m.is_diagonal() {
        let d = e - e0;
        if cabs(d) == T::zero() {
            return Err(Error::SingularEnergy(to_c64(e)));
        }
        return pole_guard(re::<T>(1.0) / d, e);
    }
    let (w, wp) = (m.omega, m.omega_p);
    let x = e / re::<T>(2.0 * w);
    let a = re::<T>(1.0 - m.nu0() / 2.0) - x;
    let c = re::<T>(1.0 + m.nu0() / 2.0) - x;
    let (wt, wpt) = (T::from_f64(w), T::from_f64(wp));
    let zr = (wt - wpt) / (wt + wpt);
    let z = Complex::new(zr * zr, T::zero());
    let f = hyp2f1_b1(a, c, z).map_err(|err| match err {
        Error::Domain { .. } => Error::SingularEnergy(to_c64(e)),
        other => other,
    })?;
    let d = e - e0;
    if cabs(d) == T::zero() {
        return Err(Error::SingularEnergy(to_c64(e)));
    }
    let sum = wt + wpt;
    let pre = T::from_f64(4.0) * wt * wpt / (sum * sum);
    pole_guard(Complex::new(pre, T::zero()) / d * f, e)
}

/// Double-precision convenience wrapper.
pub fn exact_g00_c64<M: ExactSeed>(m: &M, eps: Complex64) -> Result<Complex64> {
    m.exact_g00::<f64>(from_c64(eps))
}
