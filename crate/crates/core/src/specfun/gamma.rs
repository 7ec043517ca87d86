use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Principal logarithm of Γ(z), with the imaginary part reduced to (−π, π].
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            function: "log_gamma",
            reason: format!("non-finite argument {z}"),
        });
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z));
    }
    Ok(reduce_branch(log_gamma_unreduced(z)))
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain {
            function: "ln_gamma_real",
            reason: format!("argument {x} must be positive"),
        });
    }
    Ok(log_gamma_unreduced(Complex64::new(x, 0.0)).re)
}

fn log_gamma_unreduced(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - log_gamma_unreduced(1.0 - z);
    }
    let zm = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    (zm + 0.5) * t.ln() - t + LN_SQRT_2PI + acc.ln()
}

fn reduce_branch(w: Complex64) -> Complex64 {
    let two_pi = 2.0 * PI;
    let mut im = w.im - two_pi * (w.im / two_pi).round();
    if im <= -PI {
        im += two_pi;
    }
    Complex64::new(w.re, im)
}
