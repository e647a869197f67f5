//! Gauss rules on intervals and triangles.
//!
//! Triangle rules are collapsed (Duffy) tensor products of Gauss-Legendre
//! rules, generated on demand. They are not symmetric but they are exact
//! for every polynomial up to the requested degree.

use crate::error::{Error, Result};

pub const MAX_TRIANGLE_DEGREE: usize = 20;
pub const DEFAULT_DEGREE: usize = 12;

/// Gauss-Legendre nodes and weights on [0, 1], weights summing to 1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        // Newton on P_n from the Chebyshev-like initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    // sort ascending on [0,1]
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap());
    (idx.iter().map(|&i| x[i]).collect(), idx.iter().map(|&i| w[i]).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Barycentric coordinates.
    pub points: Vec<[f64; 3]>,
    /// Sum to one: `int_T f = |T| * sum_q w_q f(x_q)`.
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

pub fn triangle_quadrature(degree: usize) -> Result<QuadratureRule> {
    if degree > MAX_TRIANGLE_DEGREE {
        return Err(Error::UnsupportedDegree(degree));
    }
    // the collapse adds one degree in the first direction
    let n = (degree + 2).div_ceil(2);
    let (x, w) = gauss_legendre(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (&u, &wu) in x.iter().zip(&w) {
        for (&v, &wv) in x.iter().zip(&w) {
            let (px, py) = (u, v * (1.0 - u));
            points.push([1.0 - px - py, px, py]);
            weights.push(2.0 * wu * wv * (1.0 - u));
        }
    }
    Ok(QuadratureRule { points, weights, degree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).fold(1.0, |f, k| f * k as f64)
    }

    fn integrate(rule: &QuadratureRule, a: i32, b: i32) -> f64 {
        // reference triangle (0,0),(1,0),(0,1), area 1/2
        0.5 * rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(p, w)| w * p[1].powi(a) * p[2].powi(b))
            .sum::<f64>()
    }

    #[test]
    fn gauss_interval() {
        let (x, w) = gauss_legendre(6);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for k in 0..12 {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((s - 1.0 / (k as f64 + 1.0)).abs() < 1e-15, "{k}");
        }
    }

    #[test]
    fn exact_to_degree_twelve() {
        let rule = triangle_quadrature(12).unwrap();
        assert!((integrate(&rule, 0, 0) - 0.5).abs() < 1e-15);
        for a in 0..=12usize {
            for b in 0..=12 - a {
                let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                let got = integrate(&rule, a as i32, b as i32);
                assert!((got - exact).abs() <= 1e-13 * exact, "{a} {b}");
            }
        }
        let exact = factorial(13) / factorial(15);
        assert!((integrate(&rule, 13, 0) - exact).abs() > 1e-10 * exact);
    }

    #[test]
    fn all_supported_degrees() {
        for d in 0..=MAX_TRIANGLE_DEGREE {
            let rule = triangle_quadrature(d).unwrap();
            let exact = factorial(d) / factorial(d + 2);
            assert!((integrate(&rule, 0, d as i32) - exact).abs() <= 1e-13 * exact);
        }
        assert_eq!(triangle_quadrature(21), Err(Error::UnsupportedDegree(21)));
    }
}
