use jacobi_green::cfkernel::TailStrategy;
use jacobi_green::greens::*;
use jacobi_green::models::*;
use jacobi_green::specfun::hyp2f1_c64;
use jacobi_green::{Complex64, Error};
use nalgebra::DMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hydrogen() -> CoulombModel {
    CoulombModel::new(3, 0, 2.0, 1.0).unwrap()
}

/// Same operator without the closed-form fixed point, so sheet selection
/// falls back to the generic rule.
#[derive(Clone)]
struct Generic(CoulombModel);

impl JacobiOperator for Generic {
    fn diag<T: jacobi_green::specfun::Real>(&self, i: usize, eps: num_complex::Complex<T>) -> num_complex::Complex<T> {
        self.0.diag(i, eps)
    }
    fn offdiag<T: jacobi_green::specfun::Real>(&self, i: usize, eps: num_complex::Complex<T>) -> num_complex::Complex<T> {
        self.0.offdiag(i, eps)
    }
    fn check_energy(&self, eps: Complex64) -> jacobi_green::Result<()> {
        self.0.check_energy(eps)
    }
    fn is_decoupled(&self, eps: Complex64) -> bool {
        self.0.is_decoupled(eps)
    }
    fn limits(&self, eps: Complex64) -> jacobi_green::Result<(Complex64, Complex64)> {
        self.0.limits(eps)
    }
}

#[test]
fn physical_tail_closed_form() {
    let m = hydrogen();
    let w = physical_tail(&m, EnergyPoint::real(-4.0), Sheet::Physical).unwrap();
    assert!((w - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
    let w = physical_tail(&m, EnergyPoint::real(-4.0), Sheet::Unphysical).unwrap();
    assert!((w - c(-3.0, 0.0)).norm() < 1e-14);
    let w = physical_tail(&m, EnergyPoint::real(4.0), Sheet::Physical).unwrap();
    assert!((w - c(-0.6, 0.8)).norm() < 1e-15);
}

#[test]
fn generic_operator_uses_modulus_and_sign_rule() {
    let g = Generic(hydrogen());
    let w = physical_tail(&g, EnergyPoint::real(-4.0), Sheet::Physical).unwrap();
    assert!((w - c(-1.0 / 3.0, 0.0)).norm() < 1e-14);
    // on the cut both roots are unimodular
    let w = physical_tail(&g, EnergyPoint::real(4.0), Sheet::Physical).unwrap();
    assert!((w - c(-0.6, 0.8)).norm() < 1e-14, "{w}");
    let w = physical_tail(&g, EnergyPoint::real(4.0), Sheet::Unphysical).unwrap();
    assert!((w - c(-0.6, -0.8)).norm() < 1e-14, "{w}");
}

/// Minimal solution of the three-term recurrence by backward recurrence.
fn miller_ratio<O: JacobiOperator>(op: &O, eps: Complex64, depth: usize) -> Complex64 {
    let (mut hi, mut mid) = (c(0.0, 0.0), c(1.0, 0.0));
    for i in (1..=depth).rev() {
        // row i: J_{i,i-1} x_{i-1} + J_ii x_i + J_{i,i+1} x_{i+1} = 0
        let lo = -(op.diag_c64(i, eps) * mid + op.offdiag_c64(i, eps) * hi) / op.offdiag_c64(i - 1, eps);
        hi = mid;
        mid = lo;
        let s = mid.norm();
        hi /= s;
        mid /= s;
    }
    hi / mid
}

#[test]
fn tail_ratio_matches_miller_oracle() {
    let m = hydrogen();
    let e = EnergyPoint::real(-4.0);
    let r = tail_ratio(&m, e, 0, &TailOptions::default()).unwrap();
    let oracle = miller_ratio(&m, e.eps, 400);
    assert!(((r - oracle) / oracle).norm() < 1e-12, "{r} {oracle}");
}

#[test]
fn deep_ratio_approaches_tail_limit() {
    // ratio = -K(tail); the fraction value tends to the fixed point -1/3
    let r = tail_ratio(&hydrogen(), EnergyPoint::real(-4.0), 1000, &TailOptions::default()).unwrap();
    assert!((r - c(1.0 / 3.0, 0.0)).norm() <= 1e-2, "{r}");
}

#[test]
fn zero_tail_fails_above_threshold() {
    let m = CoulombModel::new(3, 0, 2.0, 5.0).unwrap();
    let e = EnergyPoint::new(c(1000.0, 1.0));
    let zero = TailOptions::default().with_tail(TailStrategy::Zero);
    assert!(matches!(
        tail_ratio(&m, e, 0, &zero),
        Err(Error::NonConvergence { .. })
    ));
    let bm = TailOptions::default().with_bm_depth(8).with_tol(1e-8);
    let r = tail_ratio_report(&m, e, 0, &bm).unwrap();
    assert!(r.converged && r.n_used <= 100, "{r:?}");
}

#[test]
fn corner_is_the_only_change() {
    let m = hydrogen();
    let e = EnergyPoint::new(c(-3.0, 0.5));
    let ratio = c(0.2, -0.1);
    let t = truncated_inverse(&m, e, 6, ratio).unwrap();
    for i in 0..6 {
        let expect = m.diag_c64(i, e.eps);
        if i < 5 {
            assert_eq!(t.diag[i], expect);
            assert_eq!(t.off[i], m.offdiag_c64(i, e.eps));
        } else {
            assert_eq!(t.diag[i], expect + m.offdiag_c64(5, e.eps) * ratio);
        }
    }
    let t = truncated_inverse(&m, e, 1, ratio).unwrap();
    assert_eq!(t.diag, vec![m.diag_c64(0, e.eps) + m.offdiag_c64(0, e.eps) * ratio]);
    assert!(t.off.is_empty());
}

#[test]
fn matched_oscillator_is_diagonal() {
    let m = OscillatorModel::new(3, 1, 1.3, 1.3).unwrap();
    let e = EnergyPoint::new(c(0.4, 0.2));
    let g = greens_matrix_b(&m, e, 6, &TailOptions::default()).unwrap();
    for i in 0..6 {
        for j in 0..6 {
            let expect = if i == j {
                1.0 / (e.eps - 1.3 * (2.0 * i as f64 + 2.5))
            } else {
                c(0.0, 0.0)
            };
            assert!((g.values[(i, j)] - expect).norm() <= 1e-15 * expect.norm().max(1.0));
        }
    }
}

#[test]
fn singular_block_reports_pivot() {
    // eps = -bS^2 decouples the basis and J_00 = 0 for Z' = 2
    let err = greens_matrix_b(&hydrogen(), EnergyPoint::real(-1.0), 4, &TailOptions::default());
    assert!(matches!(err, Err(Error::SingularMatrix { pivot: 0 })), "{err:?}");
}

#[test]
fn method_a_and_b_agree() {
    let m = hydrogen();
    let e = EnergyPoint::real(-4.0);
    let b = greens_matrix_b(&m, e, 10, &TailOptions::default()).unwrap();
    let a = greens_matrix_a_exact(&m, e, 10, Precision::DoubleDouble).unwrap();
    assert!(a.values.max_relative_deviation(&b.values) <= 1e-10);
    assert_eq!(a.method, Method::A);
    assert!(symmetry_error(&b.values) <= 1e-12);
    assert!(symmetry_error(&a.values) <= 1e-12);
    assert!(b.diagnostics.residual <= 1e-12);
}

#[test]
fn method_a_first_row_identity() {
    let m = CoulombModel::new(5, 2, 1.0, 0.5).unwrap();
    let e = EnergyPoint::new(c(-7.0, 2.0));
    let g = greens_matrix_a_exact(&m, e, 4, Precision::Double).unwrap();
    let s = m.diag_c64(0, e.eps) * g.values[(0, 0)] + m.offdiag_c64(0, e.eps) * g.values[(1, 0)];
    assert!((s - 1.0).norm() < 1e-14);
}

#[test]
fn method_a_error_estimate_grows_with_n() {
    let m = hydrogen();
    let e = EnergyPoint::real(-4.0);
    let r10 = method_a_residual(&m, e, 10).unwrap();
    let r30 = method_a_residual(&m, e, 30).unwrap();
    assert!(r30 >= r10, "{r10:e} {r30:e}");
    // double precision really loses digits at this depth
    let b = greens_matrix_b(&m, e, 10, &TailOptions::default()).unwrap();
    let a = greens_matrix_a_exact(&m, e, 10, Precision::Double).unwrap();
    let actual = a.values.max_relative_deviation(&b.values);
    assert!(actual < 10.0 * r10 && actual > 0.1 * r10, "{actual:e} {r10:e}");
    assert!(matches!(
        greens_matrix_a_exact(&m, e, 60, Precision::Double),
        Err(Error::Unstable { .. })
    ));
}

#[test]
fn exact_coulomb_matches_method_b() {
    let m = CoulombModel::new(3, 1, 2.0, 0.7).unwrap();
    let opts = TailOptions::default();
    for k in 0..20 {
        let eps = c(-0.3 - 4.7 * (k as f64 * 0.37).fract() * 10.0, 3.0 * (1.3 * k as f64).sin());
        let b = g00_method_b(&m, EnergyPoint::new(eps), &opts).unwrap();
        let x = exact_g00_c64(&m, eps).unwrap();
        assert!(((b - x) / b).norm() <= 1e-10, "{eps} {b} {x}");
    }
}

#[test]
fn exact_oscillator_matches_method_b() {
    let m = OscillatorModel::new(3, 0, 1.0, 1.3).unwrap();
    let opts = TailOptions::default();
    for eps in [c(-3.0, 0.5), c(-20.0, 3.0), c(-0.5, -2.0), c(-60.0, 0.0)] {
        let b = g00_method_b(&m, EnergyPoint::new(eps), &opts).unwrap();
        let x = exact_g00_c64(&m, eps).unwrap();
        assert!(((b - x) / b).norm() <= 1e-10, "{eps} {b} {x}");
    }
    let matched = OscillatorModel::new(2, 3, 0.8, 0.8).unwrap();
    let e = c(1.1, 0.3);
    let x = exact_g00_c64(&matched, e).unwrap();
    assert!((x - 1.0 / (e - 0.8 * 4.0)).norm() < 1e-15);
}

/// The closed form with `gamma = s zp / (2k)` and third parameter
/// `nu + 1 + extra + i gamma`, without the overall prefactor.
fn coulomb_variant(m: &CoulombModel, eps: Complex64, s: f64, extra: f64) -> Complex64 {
    let k = EnergyPoint::new(eps).k;
    let i = c(0.0, 1.0);
    let g = s * m.zp / 2.0 / k;
    let z = (m.bs + i * k) / (m.bs - i * k);
    let f = hyp2f1_c64(-m.l_prime() + i * g, c(1.0, 0.0), m.nu0() + 1.0 + extra + i * g, z * z).unwrap();
    f / ((m.bs - i * k) * (m.bs - i * k)) / (m.nu0() + i * g)
}

#[test]
fn only_one_closed_form_variant_fits() {
    let m = hydrogen();
    let opts = TailOptions::default();
    let energies: Vec<Complex64> = (0..20).map(|k| c(-0.6 - 2.1 * k as f64, 1.5 * (0.9 * k as f64).cos())).collect();
    let reference: Vec<Complex64> = energies
        .iter()
        .map(|&e| g00_method_b(&m, EnergyPoint::new(e), &opts).unwrap())
        .collect();
    let mut fits = Vec::new();
    for s in [1.0, -1.0] {
        for extra in [0.0, 2.0] {
            // a variant fits if a single constant maps it onto Method B
            let q: Vec<Complex64> = energies
                .iter()
                .zip(&reference)
                .map(|(&e, &b)| b / coulomb_variant(&m, e, s, extra))
                .collect();
            let spread = q.iter().map(|x| ((x - q[0]) / q[0]).norm()).fold(0.0, f64::max);
            if spread <= 1e-10 {
                fits.push((s, extra, q[0]));
            }
        }
    }
    assert_eq!(fits.len(), 1, "{fits:?}");
    let (s, extra, scale) = fits[0];
    assert_eq!((s, extra), (-1.0, 0.0));
    assert!((scale - c(-2.0 * m.bs, 0.0)).norm() < 1e-9);
}

#[test]
fn poles_sit_on_the_spectrum() {
    let opts = TailOptions::default();
    let m = hydrogen();
    for nr in 0..3 {
        let lv = coulomb_spectrum(&m, nr).unwrap();
        let gap = coulomb_spectrum(&m, nr + 1).unwrap() - lv;
        let p = find_g00_pole(&m, lv, gap, &opts).unwrap();
        assert!((p - lv).abs() <= 1e-8);
    }
    let osc = OscillatorModel::new(3, 1, 1.0, 1.5).unwrap();
    let p = find_g00_pole(&osc, 2.5, 2.0, &opts).unwrap();
    assert!((p - 2.5).abs() <= 1e-8);
    // the other sign of the charge term has no level there
    let printed = m.with_charge_term(ChargeTerm::Printed);
    assert!(find_g00_pole(&printed, -1.0, 0.75, &opts).is_err());
}

#[test]
fn physical_sheet_sign_and_cut() {
    let m = hydrogen();
    let opts = TailOptions::default().with_bm_depth(4);
    for x in [4.0, 100.0, 1000.0] {
        let g = exact_g00_c64(&m, c(x, 1e-8)).unwrap();
        assert!(g.im < 0.0, "{x} {g}");
        let above = g00_method_b(&m, EnergyPoint::new(c(x, 1e-6)), &opts).unwrap();
        let below = g00_method_b(&m, EnergyPoint::new(c(x, -1e-6)), &opts).unwrap();
        assert!((above - below).norm() > 1e-3 * above.norm());
    }
    let above = g00_method_b(&m, EnergyPoint::new(c(-3.0, 1e-6)), &opts).unwrap();
    let below = g00_method_b(&m, EnergyPoint::new(c(-3.0, -1e-6)), &opts).unwrap();
    assert!((above - below).norm() <= 1e-8 * above.norm().max(1.0) + 1e-5);
}

#[test]
fn factorization_detects_perturbation() {
    let g = CMatrix::from_fn(2, |i, j| c(1.0 + i as f64 + 2.0 * j as f64, 0.3 * (i * j) as f64));
    assert_eq!(factorization_check(&g), 0.0);
    let b = greens_matrix_b(&hydrogen(), EnergyPoint::real(-2.0), 6, &TailOptions::default()).unwrap();
    assert!(factorization_check(&b.values) <= 1e-10);
    // G_ij = u_min v_max is the inverse structure of a Jacobi matrix
    let (u, v) = ([1.0, 0.9, 0.8, 0.6], [1.0, 0.95, 0.85, 0.7]);
    let mut p = CMatrix::from_fn(4, |i, j| c(u[i.min(j)] * v[i.max(j)], 0.0));
    assert!(factorization_check(&p) < 1e-15);
    p[(0, 2)] *= 1.1;
    p[(2, 0)] *= 1.1;
    assert!(factorization_check(&p) >= 1e-2);
}

fn dense_oracle<O: JacobiOperator>(op: &O, eps: Complex64, m: usize) -> DMatrix<Complex64> {
    let j = DMatrix::from_fn(m, m, |i, k| {
        if i == k {
            op.diag_c64(i, eps)
        } else if i + 1 == k {
            op.offdiag_c64(i, eps)
        } else if k + 1 == i {
            op.offdiag_c64(k, eps)
        } else {
            c(0.0, 0.0)
        }
    });
    j.try_inverse().unwrap()
}

#[test]
fn truncated_inverse_matches_large_block() {
    let m = hydrogen();
    let opts = TailOptions::default();
    for n in [5, 20] {
        for x in [-0.6, -3.0, -40.0] {
            let e = EnergyPoint::real(x);
            let g = greens_matrix_b(&m, e, n, &opts).unwrap();
            let big = dense_oracle(&m, e.eps, n + 60);
            let scale = g.values.max_abs();
            for i in 0..n {
                for j in 0..n {
                    assert!((g.values[(i, j)] - big[(i, j)]).norm() <= 1e-9 * scale, "{n} {x} {i} {j}");
                }
            }
            assert!(recurrence_residual(&m, e, &g.values) <= 1e-11);
        }
    }
}

#[test]
fn tridiagonal_inverse_against_dense() {
    let t = Tridiagonal {
        diag: vec![c(1e-15, 0.0), c(2.0, 1.0), c(-1.0, 0.5), c(3.0, 0.0)],
        off: vec![c(1.0, 0.0), c(0.5, -0.2), c(0.7, 0.1)],
    };
    let inv = invert_tridiagonal(&t).unwrap();
    assert!(t.identity_residual(&inv) < 1e-13);
    let d = dense_inverse(&t.to_dense()).unwrap();
    assert!(inv.max_relative_deviation(&d) < 1e-12);
}
