use num_complex::{Complex, Complex64};

use super::JacobiOperator;
use crate::specfun::real::Real;
use crate::{Error, Result};

/// D-dimensional harmonic oscillator of frequency `omega` on an oscillator
/// basis of frequency `omega_p`, with hbar = m = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorModel {
    pub dim: u32,
    pub l: u32,
    pub omega: f64,
    pub omega_p: f64,
}

impl OscillatorModel {
    pub fn new(dim: u32, l: u32, omega: f64, omega_p: f64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidParameter("D must be >= 1".into()));
        }
        for (name, v) in [("omega", omega), ("omegaP", omega_p)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        Ok(Self {
            dim,
            l,
            omega,
            omega_p,
        })
    }

    /// True when the basis frequency matches and the operator is diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.omega == self.omega_p
    }

    /// `l + D/2`.
    pub fn nu0(&self) -> f64 {
        self.l as f64 + self.dim as f64 / 2.0
    }
}

impl JacobiOperator for OscillatorModel {
    fn diag<T: Real>(&self, i: usize, e: Complex<T>) -> Complex<T> {
        let (w, wp) = (T::from_f64(self.omega), T::from_f64(self.omega_p));
        let two = T::from_f64(2.0);
        let level = two * T::from_usize(i) + T::from_f64(self.nu0());
        e - Complex::new((w * w + wp * wp) / (two * wp) * level, T::zero())
    }

    fn offdiag<T: Real>(&self, i: usize, _e: Complex<T>) -> Complex<T> {
        let (w, wp) = (T::from_f64(self.omega), T::from_f64(self.omega_p));
        let n = T::from_usize(i);
        let root = ((n + T::one()) * (n + T::from_f64(self.nu0()))).sqrt();
        Complex::new((w * w - wp * wp) / (T::from_f64(2.0) * wp) * root, T::zero())
    }

    fn check_energy(&self, e: Complex64) -> Result<()> {
        if self.is_diagonal() {
            return Err(Error::DiagonalOperator);
        }
        if !(e.re.is_finite() && e.im.is_finite()) {
            return Err(Error::SingularEnergy(e));
        }
        Ok(())
    }

    fn is_decoupled(&self, _e: Complex64) -> bool {
        self.is_diagonal()
    }

    fn limits(&self, e: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_energy(e)?;
        let (w2, wp2) = (self.omega * self.omega, self.omega_p * self.omega_p);
        Ok((Complex64::new(-1.0, 0.0), Complex64::new(2.0 * (w2 + wp2) / (w2 - wp2), 0.0)))
    }
}

/// `E_n = omega (2n + l + D/2)`.
pub fn oscillator_spectrum(m: &OscillatorModel, n: usize) -> f64 {
    m.omega * (2.0 * n as f64 + m.nu0())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn matched_basis_is_diagonal() {
        let m = OscillatorModel::new(3, 1, 1.3, 1.3).unwrap();
        let e = Complex64::new(0.4, 0.2);
        for n in 0..10 {
            assert_eq!(m.offdiag(n, e), Complex64::new(0.0, 0.0));
            let expect = e - 1.3 * (2.0 * n as f64 + 2.5);
            assert!((m.diag(n, e) - expect).norm() < 1e-14);
        }
        assert_eq!(m.limits(e), Err(Error::DiagonalOperator));
    }

    #[test]
    fn offdiag_example() {
        let m = OscillatorModel::new(3, 0, 1.0, 2.0).unwrap();
        let e = Complex64::new(0.0, 0.0);
        assert_relative_eq!(m.offdiag(0, e).re, -0.918_558_653_543_691_7, max_relative = 1e-14);
        let (a, b) = m.limits(e).unwrap();
        assert_eq!(a.re, -1.0);
        assert_relative_eq!(b.re, -10.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn spectrum_values() {
        let m3 = OscillatorModel::new(3, 0, 1.0, 2.0).unwrap();
        let m2 = OscillatorModel::new(2, 0, 1.0, 2.0).unwrap();
        assert_eq!(oscillator_spectrum(&m3, 0), 1.5);
        assert_eq!(oscillator_spectrum(&m2, 0), 1.0);
        assert_eq!(oscillator_spectrum(&m3, 4) - oscillator_spectrum(&m3, 3), 2.0);
    }
}
