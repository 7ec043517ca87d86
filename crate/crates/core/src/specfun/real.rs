//! Scalar abstraction shared by the double-precision and the extended-precision
//! code paths, plus a double-double type used by the recurrence oracle.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Num, One, Zero};

/// Real scalar usable inside `Complex<T>` by the generic special functions and
/// the Method-A recurrence.
pub trait Real:
    Copy
    + fmt::Debug
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// Relative stopping threshold for power series at this precision.
    const SERIES_TOL: f64;
    /// Unit roundoff.
    const UNIT_ROUNDOFF: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }
}

impl Real for f64 {
    const SERIES_TOL: f64 = 1e-15;
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// Modulus `|z|` without relying on `num_traits::Float`.
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    let (x, y) = (z.re.abs(), z.im.abs());
    let (big, small) = if x > y { (x, y) } else { (y, x) };
    if big == T::zero() {
        return T::zero();
    }
    let r = small / big;
    big * (T::one() + r * r).sqrt()
}

/// Principal square root (`Re >= 0`, branch cut on the negative real axis).
pub fn csqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = T::from_f64(2.0);
    let r = cabs(z);
    if r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    if z.re >= T::zero() {
        let s = ((r + z.re) / two).sqrt();
        Complex::new(s, z.im / (two * s))
    } else {
        let t = ((r - z.re) / two).sqrt();
        let re = z.im.abs() / (two * t);
        if z.im < T::zero() {
            Complex::new(re, -t)
        } else {
            Complex::new(re, t)
        }
    }
}

/// Square root on the upper half plane: `k` with `k^2 = z` and `Im k >= 0`.
pub fn sqrt_upper<T: Real>(z: Complex<T>) -> Complex<T> {
    let k = csqrt(z);
    if k.im < T::zero() {
        -k
    } else {
        k
    }
}

pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving roughly 32
/// significant digits. Arithmetic follows the classic QD-library algorithms.
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Self { hi, lo }
    }

    fn trunc(self) -> Self {
        let h = self.hi.trunc();
        if h == self.hi {
            Self::new(h, self.lo.trunc())
        } else {
            Self::new(h, 0.0)
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hi + self.lo)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x, 0.0)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - (self / b).trunc() * b
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::new(1.0, 0.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Self::from)
    }
}

impl Real for DoubleDouble {
    const SERIES_TOL: f64 = 1e-30;
    // 2^-104
    const UNIT_ROUNDOFF: f64 = 4.930_380_657_631_324e-32;

    fn from_f64(x: f64) -> Self {
        Self::from(x)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::zero()
            } else {
                Self::new(f64::NAN, f64::NAN)
            };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let ax_dd = Self::from(ax);
        let corr = (self - ax_dd * ax_dd).hi * (x * 0.5);
        Self::from(ax).add_f64(corr)
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Dd = DoubleDouble;

    #[test]
    fn division_keeps_low_word() {
        let third = Dd::from(1.0) / Dd::from(3.0);
        let back = third * Dd::from(3.0) - Dd::from(1.0);
        assert!(back.to_f64().abs() < 1e-31, "{back:?}");
        assert!(third.lo() != 0.0);
    }

    #[test]
    fn sqrt_squares_back() {
        for x in [2.0, 3.0, 0.5, 12345.678, 1e-20] {
            let s = Dd::from(x).sqrt();
            let r = s * s - Dd::from(x);
            assert!(r.to_f64().abs() <= 1e-31 * x, "x = {x}: {r:?}");
        }
    }

    #[test]
    fn sqrt_products_agree() {
        let lhs = Dd::from(7.0).sqrt() * Dd::from(11.0).sqrt();
        let rhs = Dd::from(77.0).sqrt();
        assert!((lhs - rhs).to_f64().abs() < 1e-30);
    }

    #[test]
    fn csqrt_principal_and_upper() {
        let z = Complex::new(-4.0, -0.0);
        assert_eq!(sqrt_upper(z), Complex::new(0.0, 2.0));
        let z = Complex::new(3.0, -4.0);
        let k = csqrt(z);
        assert!((k - Complex::new(2.0, -1.0)).norm() < 1e-15);
        assert!((sqrt_upper(z) - Complex::new(-2.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn complex_double_double_division() {
        let a: Complex<Dd> = Complex::new(Dd::from(1.0), Dd::from(2.0));
        let b: Complex<Dd> = Complex::new(Dd::from(3.0), Dd::from(-1.0));
        let q = a / b;
        let back = q * b - a;
        assert!(cabs(back).to_f64() < 1e-30);
    }
}
