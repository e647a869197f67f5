//! Bivariate polynomials of degree five in scaled, centred monomials
//! `((x - cx)/h)^a ((y - cy)/h)^b`, `a + b <= 5`.

pub const DEGREE: usize = 5;
pub const N_MONO: usize = 21;

/// Exponent pairs in graded order: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
pub const EXPONENTS: [(usize, usize); N_MONO] = {
    let mut e = [(0, 0); N_MONO];
    let mut k = 0;
    let mut d = 0;
    while d <= DEGREE {
        let mut b = 0;
        while b <= d {
            e[k] = (d - b, b);
            k += 1;
            b += 1;
        }
        d += 1;
    }
    e
};

/// Index of the monomial with exponents `(a, b)`.
pub const fn mono_index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

fn falling(p: usize, a: usize) -> f64 {
    (0..a).fold(1.0, |f, i| f * (p - i) as f64)
}

/// Values of `d^a/dxi^a d^b/deta^b` of every monomial at `(xi, eta)`.
pub fn monomial_derivs(xi: f64, eta: f64, a: usize, b: usize) -> [f64; N_MONO] {
    let mut px = [1.0; DEGREE + 1];
    let mut py = [1.0; DEGREE + 1];
    for i in 1..=DEGREE {
        px[i] = px[i - 1] * xi;
        py[i] = py[i - 1] * eta;
    }
    let mut out = [0.0; N_MONO];
    for (k, &(p, q)) in EXPONENTS.iter().enumerate() {
        if p >= a && q >= b {
            out[k] = falling(p, a) * falling(q, b) * px[p - a] * py[q - b];
        }
    }
    out
}

/// A quintic on one triangle, stored in the triangle's scaled monomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalPoly {
    pub coeffs: [f64; N_MONO],
    pub cx: f64,
    pub cy: f64,
    pub h: f64,
}

impl LocalPoly {
    /// Physical derivative `d^a/dx^a d^b/dy^b` at `(x, y)`.
    pub fn deriv(&self, a: usize, b: usize, x: f64, y: f64) -> f64 {
        if a + b > DEGREE {
            return 0.0;
        }
        let m = monomial_derivs((x - self.cx) / self.h, (y - self.cy) / self.h, a, b);
        let s: f64 = m.iter().zip(&self.coeffs).map(|(m, c)| m * c).sum();
        s / self.h.powi((a + b) as i32)
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.deriv(0, 0, x, y)
    }

    /// All partial derivatives of total order `order`, indexed by the power of `y`.
    pub fn derivs_of_order(&self, order: usize, x: f64, y: f64) -> Vec<f64> {
        (0..=order).map(|b| self.deriv(order - b, b, x, y)).collect()
    }

    /// Bilaplacian, read off the quartic-and-higher coefficients.
    pub fn bilaplacian(&self, x: f64, y: f64) -> f64 {
        self.deriv(4, 0, x, y) + 2.0 * self.deriv(2, 2, x, y) + self.deriv(0, 4, x, y)
    }
}
