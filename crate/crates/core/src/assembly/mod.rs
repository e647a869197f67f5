//! Stiffness, mass and buckling matrices of the Argyris space.

pub mod quadrature;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::Triangulation;
use crate::space::poly::{monomial_derivs, N_MONO};
use crate::space::{DofMap, ElementBasis, Mat21, ReductionMap, LOCAL_DOFS};
use crate::sparse::CsrMatrix;
pub use quadrature::{gauss_legendre, triangle_quadrature, QuadratureRule, DEFAULT_DEGREE};

/// The bilinear forms of the eigenproblems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `(D^2 u, D^2 v)`
    Stiffness,
    /// `(u, v)`, the mass form `b_0`
    Mass,
    /// `(grad u, grad v)`, the buckling form `b_1`
    Gradient,
}

impl Form {
    /// `b_s` for `s` in {0, 1}.
    pub fn mass(s: u8) -> Result<Form> {
        match s {
            0 => Ok(Form::Mass),
            1 => Ok(Form::Gradient),
            _ => Err(Error::InvalidInput(format!("mass form index {s} not in {{0, 1}}"))),
        }
    }
}

/// Gram matrix of the scaled monomials of one triangle under `form`.
fn monomial_gram(mesh: &Triangulation, b: &ElementBasis, form: Form, rule: &QuadratureRule) -> Mat21 {
    let area = mesh.area(b.tri);
    let [p0, p1, p2] = mesh.vertices(b.tri);
    let mut g = Mat21::zeros();
    let mut add = |w: f64, u: &[f64; N_MONO], v: &[f64; N_MONO]| {
        for i in 0..N_MONO {
            if u[i] == 0.0 {
                continue;
            }
            let wu = w * u[i];
            for j in 0..N_MONO {
                g[(i, j)] += wu * v[j];
            }
        }
    };
    for (l, &w) in rule.points.iter().zip(&rule.weights) {
        let x = l[0] * p0.x + l[1] * p1.x + l[2] * p2.x;
        let y = l[0] * p0.y + l[1] * p1.y + l[2] * p2.y;
        let (xi, eta) = ((x - b.cx) / b.h, (y - b.cy) / b.h);
        match form {
            Form::Mass => {
                let m = monomial_derivs(xi, eta, 0, 0);
                add(w, &m, &m);
            }
            Form::Gradient => {
                add(w, &monomial_derivs(xi, eta, 1, 0), &monomial_derivs(xi, eta, 1, 0));
                add(w, &monomial_derivs(xi, eta, 0, 1), &monomial_derivs(xi, eta, 0, 1));
            }
            Form::Stiffness => {
                let mxx = monomial_derivs(xi, eta, 2, 0);
                let mxy = monomial_derivs(xi, eta, 1, 1);
                let myy = monomial_derivs(xi, eta, 0, 2);
                add(w, &mxx, &mxx);
                add(2.0 * w, &mxy, &mxy);
                add(w, &myy, &myy);
            }
        }
    }
    let scale = match form {
        Form::Mass => area,
        Form::Gradient => area / (b.h * b.h),
        Form::Stiffness => area / b.h.powi(4),
    };
    g * scale
}

/// Local 21x21 matrix of `form` in the nodal basis of one triangle.
pub fn element_matrix(mesh: &Triangulation, basis: &ElementBasis, form: Form, rule: &QuadratureRule) -> Mat21 {
    let g = monomial_gram(mesh, basis, form, rule);
    let mut k = basis.coef.transpose() * g * basis.coef;
    for i in 0..LOCAL_DOFS {
        for j in 0..LOCAL_DOFS {
            k[(i, j)] *= basis.signs[i] * basis.signs[j];
        }
    }
    // exact symmetry
    (k + k.transpose()) * 0.5
}

/// Global matrix of `form` with the given quadrature degree.
pub fn assemble_with(
    mesh: &Triangulation,
    dofmap: &DofMap,
    bases: &[ElementBasis],
    form: Form,
    degree: usize,
) -> Result<CsrMatrix> {
    let rule = triangle_quadrature(degree)?;
    let blocks: Vec<Mat21> = bases.par_iter().map(|b| element_matrix(mesh, b, form, &rule)).collect();
    let mut trip = Vec::with_capacity(blocks.len() * LOCAL_DOFS * LOCAL_DOFS);
    for (b, k) in bases.iter().zip(&blocks) {
        for i in 0..LOCAL_DOFS {
            for j in 0..LOCAL_DOFS {
                trip.push((b.dofs[i], b.dofs[j], k[(i, j)]));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(dofmap.n, dofmap.n, trip))
}

pub fn assemble_stiffness(mesh: &Triangulation, dofmap: &DofMap, bases: &[ElementBasis]) -> CsrMatrix {
    assemble_with(mesh, dofmap, bases, Form::Stiffness, DEFAULT_DEGREE).expect("default rule exists")
}

/// `s = 0`: L2 mass matrix; `s = 1`: gradient (buckling) matrix.
pub fn assemble_mass(mesh: &Triangulation, dofmap: &DofMap, bases: &[ElementBasis], s: u8) -> Result<CsrMatrix> {
    assemble_with(mesh, dofmap, bases, Form::mass(s)?, DEFAULT_DEGREE)
}

/// `form(u, u)` of a full coefficient vector, integrated triangle by
/// triangle from the local polynomials. Every quadrature term is a sum of
/// squares, so unlike `x^T M x` there is no cancellation between rows.
pub fn form_value(mesh: &Triangulation, bases: &[ElementBasis], u: &[f64], form: Form) -> f64 {
    let rule = triangle_quadrature(DEFAULT_DEGREE).expect("default rule exists");
    let per_tri: Vec<f64> = bases
        .par_iter()
        .map(|b| {
            let p = b.poly(u);
            let [a, c, d] = mesh.vertices(b.tri);
            let mut s = 0.0;
            for (l, &w) in rule.points.iter().zip(&rule.weights) {
                let x = l[0] * a.x + l[1] * c.x + l[2] * d.x;
                let y = l[0] * a.y + l[1] * c.y + l[2] * d.y;
                s += w * match form {
                    Form::Mass => p.value(x, y).powi(2),
                    Form::Gradient => p.deriv(1, 0, x, y).powi(2) + p.deriv(0, 1, x, y).powi(2),
                    Form::Stiffness => {
                        p.deriv(2, 0, x, y).powi(2) + 2.0 * p.deriv(1, 1, x, y).powi(2) + p.deriv(0, 2, x, y).powi(2)
                    }
                };
            }
            s * mesh.area(b.tri)
        })
        .collect();
    per_tri.iter().sum()
}

/// `P^T M P`, symmetrized.
pub fn reduce(m: &CsrMatrix, r: &ReductionMap) -> Result<CsrMatrix> {
    if m.nrows != r.n || m.ncols != r.n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, reduction expects {}",
            m.nrows, m.ncols, r.n
        )));
    }
    let pt = r.p.transpose();
    Ok(pt.matmul(&m.matmul(&r.p)?)?.symmetrized())
}
