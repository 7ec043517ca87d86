//! Cauchy contour integrals of `G_00` and the bound-state overlaps their
//! residues should reproduce.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::greens::{g00_method_b, TailOptions};
use crate::models::{coulomb_bound_wavefunction, coulomb_spectrum, cs_function, CoulombModel, EnergyPoint};
use crate::specfun::{gauss_legendre, QuadratureRule};
use crate::{Error, Result};

/// Minimum distance between the contour and any bound-state pole.
pub const POLE_CLEARANCE: f64 = 1e-6;

/// Counterclockwise axis-aligned ellipse, integrated arc by arc with a
/// Gauss–Legendre rule of `points_per_quadrant` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius_x: f64,
    pub radius_y: f64,
    pub points_per_quadrant: usize,
    pub rule: QuadratureRule,
}

impl ContourSpec {
    pub fn ellipse(center: Complex64, radius_x: f64, radius_y: f64, points_per_quadrant: usize) -> Result<Self> {
        if !(radius_x > 0.0 && radius_y > 0.0 && radius_x.is_finite() && radius_y.is_finite()) {
            return Err(Error::InvalidContour(format!(
                "radii must be positive, got {radius_x} and {radius_y}"
            )));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidContour(format!("center {center} is not finite")));
        }
        if points_per_quadrant < 4 {
            return Err(Error::InvalidContour(format!(
                "points_per_quadrant = {points_per_quadrant} must be >= 4"
            )));
        }
        Ok(Self {
            center,
            radius_x,
            radius_y,
            points_per_quadrant,
            rule: gauss_legendre(points_per_quadrant)?,
        })
    }

    pub fn circle(center: Complex64, radius: f64, points_per_quadrant: usize) -> Result<Self> {
        Self::ellipse(center, radius, radius, points_per_quadrant)
    }

    /// Circle around the levels `first..=last` that keeps half of each
    /// neighbouring gap as clearance.
    pub fn around_levels(m: &CoulombModel, first: usize, last: usize, points_per_quadrant: usize) -> Result<Self> {
        if last < first {
            return Err(Error::InvalidParameter(format!("empty level range {first}..={last}")));
        }
        let lo = coulomb_spectrum(m, first)?;
        let hi = coulomb_spectrum(m, last)?;
        let above = coulomb_spectrum(m, last + 1)? - hi;
        let below = if first == 0 { above } else { lo - coulomb_spectrum(m, first - 1)? };
        let margin = 0.5 * above.min(below);
        let rx = 0.5 * (hi - lo) + margin;
        Self::circle(Complex64::new(0.5 * (lo + hi), 0.0), rx, points_per_quadrant)
    }

    pub fn point(&self, theta: f64) -> Complex64 {
        self.center + Complex64::new(self.radius_x * theta.cos(), self.radius_y * theta.sin())
    }

    fn tangent(&self, theta: f64) -> Complex64 {
        Complex64::new(-self.radius_x * theta.sin(), self.radius_y * theta.cos())
    }

    /// True if `z` lies strictly inside.
    pub fn encloses(&self, z: Complex64) -> bool {
        let d = z - self.center;
        (d.re / self.radius_x).powi(2) + (d.im / self.radius_y).powi(2) < 1.0
    }

    /// Distance from `z` to the contour.
    pub fn distance(&self, z: Complex64) -> f64 {
        const SAMPLES: usize = 4096;
        let step = 2.0 * PI / SAMPLES as f64;
        let d = |t: f64| (self.point(t) - z).norm();
        let best = (0..SAMPLES)
            .map(|k| k as f64 * step)
            .min_by(|a, b| d(*a).total_cmp(&d(*b)))
            .unwrap_or(0.0);
        // golden-section refinement inside the best sample's bracket
        let (mut a, mut b) = (best - step, best + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let (x1, x2) = (b - g * (b - a), a + g * (b - a));
            if d(x1) < d(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        d(0.5 * (a + b)).min(d(best))
    }

    /// Levels `nr` of `m` enclosed by the contour.
    pub fn poles_enclosed(&self, m: &CoulombModel) -> Vec<usize> {
        levels_left_of(m, self.center.re + self.radius_x)
            .into_iter()
            .filter(|&(_, e)| self.encloses(Complex64::new(e, 0.0)))
            .map(|(nr, _)| nr)
            .collect()
    }

    /// The contour must stay off the continuum `[0, inf)` and at least
    /// `POLE_CLEARANCE` away from every bound-state pole of `m`.
    pub fn check(&self, m: &CoulombModel) -> Result<()> {
        // the ellipse meets the real axis only if |Im c| <= ry
        let h = self.center.im / self.radius_y;
        if h.abs() <= 1.0 {
            let right = self.center.re + self.radius_x * (1.0 - h * h).sqrt();
            if right >= 0.0 {
                return Err(Error::InvalidContour(format!(
                    "contour reaches the continuum at {right}"
                )));
            }
        }
        for (nr, e) in levels_left_of(m, self.center.re + self.radius_x + POLE_CLEARANCE) {
            let dist = self.distance(Complex64::new(e, 0.0));
            if dist < POLE_CLEARANCE {
                return Err(Error::InvalidContour(format!(
                    "contour passes {dist:e} from the level nr = {nr} at {e}"
                )));
            }
        }
        Ok(())
    }
}

/// Bound-state levels below `x`, down to the ground state. Levels accumulate
/// at zero, so `x` must be negative for the list to be finite.
fn levels_left_of(m: &CoulombModel, x: f64) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    if x >= 0.0 {
        return out;
    }
    let mut nr = 0;
    while let Ok(e) = coulomb_spectrum(m, nr) {
        if e >= x {
            break;
        }
        out.push((nr, e));
        nr += 1;
    }
    out
}

/// `(1 / 2 pi i) \oint G_00(eps) d eps` with `G_00` from Method B.
pub fn contour_integral_g00(m: &CoulombModel, contour: &ContourSpec, opts: &TailOptions) -> Result<Complex64> {
    contour.check(m)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for q in 0..4 {
        let (a, b) = (q as f64 * FRAC_PI_2, (q + 1) as f64 * FRAC_PI_2);
        let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
        for (x, w) in contour.rule.nodes.iter().zip(&contour.rule.weights) {
            let t = mid + half * x;
            let g = g00_method_b(m, EnergyPoint::new(contour.point(t)), opts)?;
            sum += w * half * g * contour.tangent(t);
        }
    }
    Ok(sum / Complex64::new(0.0, 2.0 * PI))
}

const OVERLAP_ORDER: usize = 24;
const OVERLAP_AGREEMENT: f64 = 1e-11;

/// `<0~|psi_nr> = \int_0^inf phi_0(bS, r) / r * psi_{nr,l}(r) dr` by composite
/// Gauss–Legendre, checked against the rule of twice the order.
pub fn overlap_cs_bound(m: &CoulombModel, nr: usize) -> Result<f64> {
    coulomb_spectrum(m, nr)?;
    let integrand = |r: f64| -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let psi = coulomb_bound_wavefunction(nr, m, r).unwrap_or(f64::NAN);
        cs_function(0, m, r) / r * psi
    };
    // both factors decay like exp(-decay r) times a polynomial
    let a0 = m.zp / (nr as f64 + m.nu0());
    let decay = m.bs + 0.5 * a0;
    // panels resolve the slower of the two scales and the nr nodes
    let width = (1.0 / m.bs).min(2.0 / a0) / (1.0 + 0.25 * nr as f64);
    let mut upper = 10.0 / decay;
    while upper < 1e6 / decay {
        let tail = integrand(upper).abs().max(integrand(1.1 * upper).abs());
        if tail * upper < 1e-16 {
            break;
        }
        upper *= 1.5;
    }
    let panels = (upper / width).ceil().max(1.0) as usize;
    let h = upper / panels as f64;
    let integrate = |rule: &QuadratureRule| -> f64 {
        (0..panels)
            .map(|k| rule.integrate(k as f64 * h, (k + 1) as f64 * h, integrand))
            .sum()
    };
    let coarse = integrate(&gauss_legendre(OVERLAP_ORDER)?);
    let fine = integrate(&gauss_legendre(2 * OVERLAP_ORDER)?);
    let difference = (fine - coarse).abs();
    if !(difference <= OVERLAP_AGREEMENT * fine.abs().max(1.0)) {
        return Err(Error::QuadratureDisagreement { difference });
    }
    Ok(fine)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueReport {
    pub integral: Complex64,
    pub expected: Complex64,
    pub abs_error: f64,
    pub poles_enclosed: Vec<usize>,
}

impl ResidueReport {
    fn new(integral: Complex64, expected: Complex64, poles_enclosed: Vec<usize>) -> Self {
        Self {
            integral,
            expected,
            abs_error: (integral - expected).norm(),
            poles_enclosed,
        }
    }
}

/// Contour integral around `contour` compared with the sum of the squared
/// overlaps of the levels it encloses.
pub fn residue_report(m: &CoulombModel, contour: &ContourSpec, opts: &TailOptions) -> Result<ResidueReport> {
    let integral = contour_integral_g00(m, contour, opts)?;
    let poles = contour.poles_enclosed(m);
    let mut expected = 0.0;
    for &nr in &poles {
        expected += overlap_cs_bound(m, nr)?.powi(2);
    }
    Ok(ResidueReport::new(integral, Complex64::new(expected, 0.0), poles))
}

pub const SUITE_POINTS_PER_QUADRANT: usize = 32;

/// A pole-free report followed by one report per level `nr < n_poles`.
pub fn residue_suite(m: &CoulombModel, n_poles: usize, opts: &TailOptions) -> Result<Vec<ResidueReport>> {
    if n_poles > 3 {
        return Err(Error::InvalidParameter(format!("n_poles = {n_poles} must be <= 3")));
    }
    let ground = coulomb_spectrum(m, 0)?;
    // below the ground state there is nothing to enclose
    let free = ContourSpec::circle(Complex64::new(3.0 * ground, 0.0), ground.abs(), SUITE_POINTS_PER_QUADRANT)?;
    let mut out = vec![residue_report(m, &free, opts)?];
    for nr in 0..n_poles {
        let c = ContourSpec::around_levels(m, nr, nr, SUITE_POINTS_PER_QUADRANT)?;
        out.push(residue_report(m, &c, opts)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hydrogen() -> CoulombModel {
        CoulombModel::new(3, 0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn contour_must_avoid_cut_and_poles() {
        let m = hydrogen();
        let ok = ContourSpec::circle(Complex64::new(-1.0, 0.0), 0.5, 8).unwrap();
        assert!(ok.check(&m).is_ok());
        let cut = ContourSpec::circle(Complex64::new(-0.2, 0.0), 0.3, 8).unwrap();
        assert!(matches!(cut.check(&m), Err(Error::InvalidContour(_))));
        let grazing = ContourSpec::circle(Complex64::new(-1.5, 0.0), 0.5 - 1e-7, 8).unwrap();
        assert!(matches!(grazing.check(&m), Err(Error::InvalidContour(_))));
        // above the axis the continuum is not crossed
        let lifted = ContourSpec::circle(Complex64::new(2.0, 3.0), 1.0, 8).unwrap();
        assert!(lifted.check(&m).is_ok());
        assert!(ContourSpec::circle(Complex64::new(-1.0, 0.0), 0.5, 3).is_err());
        assert!(ContourSpec::ellipse(Complex64::new(-1.0, 0.0), 0.5, 0.0, 8).is_err());
    }

    #[test]
    fn enclosed_levels() {
        let m = hydrogen();
        let c = ContourSpec::around_levels(&m, 0, 0, 8).unwrap();
        assert_eq!(c.poles_enclosed(&m), vec![0]);
        let c = ContourSpec::around_levels(&m, 0, 1, 8).unwrap();
        assert_eq!(c.poles_enclosed(&m), vec![0, 1]);
        let c = ContourSpec::around_levels(&m, 1, 2, 8).unwrap();
        assert_eq!(c.poles_enclosed(&m), vec![1, 2]);
        assert!(c.check(&m).is_ok());
    }

    #[test]
    fn ground_state_overlap() {
        // bS = a0 / 2 here: phi_0 / r and psi_0 are the same function up to
        // normalization, and the residue is exactly one
        let v = overlap_cs_bound(&hydrogen(), 0).unwrap();
        assert!((v - 1.0).abs() < 1e-13, "{v}");
        let m = CoulombModel::new(3, 0, 2.0, 1.0).unwrap();
        assert!(overlap_cs_bound(&m, 6).unwrap().abs() < v.abs());
        let repulsive = CoulombModel::new(3, 0, -1.0, 1.0).unwrap();
        assert!(matches!(overlap_cs_bound(&repulsive, 0), Err(Error::NoBoundStates)));
    }

    #[test]
    fn pole_free_and_single_pole() {
        let m = hydrogen();
        let opts = TailOptions::default();
        let free = ContourSpec::circle(Complex64::new(-10.0, 0.0), 0.1, 16).unwrap();
        assert!(contour_integral_g00(&m, &free, &opts).unwrap().norm() <= 1e-12);
        let reports = residue_suite(&m, 1, &opts).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports[0].poles_enclosed.is_empty() && reports[0].abs_error <= 1e-12);
        assert_eq!(reports[1].poles_enclosed, vec![0]);
        assert!(reports[1].abs_error <= 1e-10, "{:?}", reports[1]);
        assert!(residue_suite(&m, 4, &opts).is_err());
    }
}
