use std::f64::consts::PI;

use crate::{Error, Result};

/// Gauss–Legendre rule on (−1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    /// ∫ₐᵇ f(x) dx with the rule mapped affinely onto [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x);
        }
        s * half
    }
}

/// Legendre P_n(x) and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the `order`-point Gauss–Legendre rule.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidParameter("quadrature order must be >= 1".into()));
    }
    if order == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.0],
            weights: vec![2.0],
            order,
        });
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = theta.cos() * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_orders() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!((r.nodes.clone(), r.weights.clone()), (vec![0.0], vec![2.0]));
        let r = gauss_legendre(2).unwrap();
        assert_relative_eq!(r.nodes[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.nodes[0], -1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.weights[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(r.weights[1], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn third_order_quartic() {
        let r = gauss_legendre(3).unwrap();
        let v = r.integrate(-1.0, 1.0, |x| x.powi(4));
        assert!((v - 0.4).abs() <= 1e-15);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(gauss_legendre(0).is_err());
    }

    #[test]
    fn mapped_interval() {
        let r = gauss_legendre(20).unwrap();
        let v = r.integrate(0.0, PI, f64::sin);
        assert_relative_eq!(v, 2.0, max_relative = 1e-14);
    }
}
