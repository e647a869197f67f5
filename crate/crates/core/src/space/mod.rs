//! The quintic Argyris space on a conforming triangulation.
//!
//! Global degrees of freedom: six per vertex (value, gradient, Hessian in
//! Cartesian components) followed by one per edge (normal derivative at the
//! edge midpoint along the edge's global normal). Per triangle, the 21 local
//! functionals are the three vertex blocks followed by the three midpoint
//! normal derivatives of local edges 0, 1, 2.

mod constraints;
pub mod poly;
mod reduction;

pub use constraints::{boundary_constraints, ConstraintSet, SpaceKind, SparseRow};
pub use reduction::{eliminate, ReductionMap};

use nalgebra::{SMatrix, SVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::{Point2, Triangulation};
use poly::{monomial_derivs, LocalPoly, N_MONO};

pub const VERTEX_DOFS: usize = 6;
pub const LOCAL_DOFS: usize = 21;

pub type Mat21 = SMatrix<f64, LOCAL_DOFS, LOCAL_DOFS>;
pub type Vec21 = SVector<f64, LOCAL_DOFS>;

/// Value, gradient and Hessian `(f, fx, fy, fxx, fxy, fyy)` of a function at a point.
pub type Jet = [f64; 6];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofMap {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n: usize,
}

impl DofMap {
    pub fn new(mesh: &Triangulation) -> Self {
        let n_vertices = mesh.n_points();
        let n_edges = mesh.n_edges();
        DofMap { n_vertices, n_edges, n: VERTEX_DOFS * n_vertices + n_edges }
    }

    /// `k` in 0..6: value, d/dx, d/dy, d2/dx2, d2/dxdy, d2/dy2.
    pub fn vertex_dof(&self, v: usize, k: usize) -> usize {
        VERTEX_DOFS * v + k
    }

    pub fn edge_dof(&self, e: usize) -> usize {
        VERTEX_DOFS * self.n_vertices + e
    }

    pub fn local_dofs(&self, mesh: &Triangulation, t: usize) -> [usize; LOCAL_DOFS] {
        let mut d = [0; LOCAL_DOFS];
        let tri = &mesh.tris[t];
        for i in 0..3 {
            for k in 0..VERTEX_DOFS {
                d[VERTEX_DOFS * i + k] = self.vertex_dof(tri.v[i], k);
            }
            d[18 + i] = self.edge_dof(mesh.tri_edges[t][i]);
        }
        d
    }
}

/// Derivative order of each local functional.
const FUNCTIONAL_ORDER: [i32; LOCAL_DOFS] = [
    0, 1, 1, 2, 2, 2, 0, 1, 1, 2, 2, 2, 0, 1, 1, 2, 2, 2, 1, 1, 1,
];

/// Nodal basis of one triangle.
#[derive(Debug, Clone)]
pub struct ElementBasis {
    pub tri: usize,
    pub cx: f64,
    pub cy: f64,
    /// Diameter, the scaling length of the monomials.
    pub h: f64,
    /// Column `i` holds the monomial coefficients of basis function `i`.
    pub coef: Mat21,
    pub dofs: [usize; LOCAL_DOFS],
    /// Orientation factor per local functional. The midpoint functionals use
    /// the global edge normal, so these are all +1.
    pub signs: [f64; LOCAL_DOFS],
}

impl ElementBasis {
    pub fn new(mesh: &Triangulation, dofmap: &DofMap, t: usize) -> Result<Self> {
        let c = mesh.centroid(t);
        let h = mesh.diameter(t);
        let verts = mesh.vertices(t);
        let scaled = |p: Point2| ((p.x - c.x) / h, (p.y - c.y) / h);

        // row j: functional j (in scaled derivatives) applied to every monomial
        let mut v = Mat21::zeros();
        for (i, p) in verts.iter().enumerate() {
            let (xi, eta) = scaled(*p);
            let derivs = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
            for (k, &(a, b)) in derivs.iter().enumerate() {
                let m = monomial_derivs(xi, eta, a, b);
                for (col, val) in m.iter().enumerate() {
                    v[(VERTEX_DOFS * i + k, col)] = *val;
                }
            }
        }
        for i in 0..3 {
            let f = mesh.edge_frame(mesh.tri_edges[t][i]);
            let (xi, eta) = scaled(f.midpoint);
            let mx = monomial_derivs(xi, eta, 1, 0);
            let my = monomial_derivs(xi, eta, 0, 1);
            for col in 0..N_MONO {
                v[(18 + i, col)] = f.normal[0] * mx[col] + f.normal[1] * my[col];
            }
        }

        let lu = v.full_piv_lu();
        let u = lu.u();
        let diag: Vec<f64> = (0..LOCAL_DOFS).map(|i| u[(i, i)].abs()).collect();
        let dmax = diag.iter().cloned().fold(0.0, f64::max);
        let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let cond = if dmin > 0.0 { dmax / dmin } else { f64::INFINITY };
        if !(cond <= 1e14) {
            return Err(Error::SingularElementMatrix { tri: t, cond });
        }
        let inv = lu
            .try_inverse()
            .ok_or(Error::SingularElementMatrix { tri: t, cond })?;
        // undo the functional scaling: physical functional j = h^-order * scaled functional j
        let mut coef = inv;
        for (i, ord) in FUNCTIONAL_ORDER.iter().enumerate() {
            let s = h.powi(*ord);
            for k in 0..N_MONO {
                coef[(k, i)] *= s;
            }
        }
        Ok(ElementBasis {
            tri: t,
            cx: c.x,
            cy: c.y,
            h,
            coef,
            dofs: dofmap.local_dofs(mesh, t),
            signs: [1.0; LOCAL_DOFS],
        })
    }

    /// Polynomial with the given local DOF values.
    pub fn poly_from_local(&self, local: &Vec21) -> LocalPoly {
        let c = self.coef * local;
        let mut coeffs = [0.0; N_MONO];
        coeffs.copy_from_slice(c.as_slice());
        LocalPoly { coeffs, cx: self.cx, cy: self.cy, h: self.h }
    }

    /// Polynomial of a global coefficient vector restricted to this triangle.
    pub fn poly(&self, global: &[f64]) -> LocalPoly {
        let local = Vec21::from_fn(|i, _| self.signs[i] * global[self.dofs[i]]);
        self.poly_from_local(&local)
    }

    /// Basis function `i` as a polynomial.
    pub fn basis_poly(&self, i: usize) -> LocalPoly {
        let mut local = Vec21::zeros();
        local[i] = 1.0;
        self.poly_from_local(&local)
    }

    /// The 21x21 matrix of local functionals applied to the basis functions.
    pub fn duality_matrix(&self, mesh: &Triangulation) -> Mat21 {
        let verts = mesh.tris[self.tri].v;
        let mut d = Mat21::zeros();
        for i in 0..LOCAL_DOFS {
            let p = self.basis_poly(i);
            for (j, jet) in (0..3).map(|k| jet_of(&p, mesh.points[verts[k]])).enumerate() {
                for k in 0..VERTEX_DOFS {
                    d[(VERTEX_DOFS * j + k, i)] = jet[k];
                }
            }
            for j in 0..3 {
                let f = mesh.edge_frame(mesh.tri_edges[self.tri][j]);
                let (x, y) = (f.midpoint.x, f.midpoint.y);
                d[(18 + j, i)] = f.normal[0] * p.deriv(1, 0, x, y) + f.normal[1] * p.deriv(0, 1, x, y);
            }
        }
        d
    }

    /// Coefficient-matrix dump, one CSV row per monomial.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for k in 0..N_MONO {
            let row: Vec<String> = (0..LOCAL_DOFS).map(|i| format!("{:?}", self.coef[(k, i)])).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

fn jet_of(p: &LocalPoly, q: Point2) -> Jet {
    let (x, y) = (q.x, q.y);
    [
        p.value(x, y),
        p.deriv(1, 0, x, y),
        p.deriv(0, 1, x, y),
        p.deriv(2, 0, x, y),
        p.deriv(1, 1, x, y),
        p.deriv(0, 2, x, y),
    ]
}

/// Element bases of all triangles, computed independently per triangle.
pub fn element_bases(mesh: &Triangulation, dofmap: &DofMap) -> Result<Vec<ElementBasis>> {
    (0..mesh.n_tris())
        .into_par_iter()
        .map(|t| ElementBasis::new(mesh, dofmap, t))
        .collect()
}

/// Global DOF values of a smooth function given through its jets.
pub fn interpolate<F>(mesh: &Triangulation, dofmap: &DofMap, f: F) -> Vec<f64>
where
    F: Fn(f64, f64) -> Jet,
{
    let mut x = vec![0.0; dofmap.n];
    for (v, p) in mesh.points.iter().enumerate() {
        let jet = f(p.x, p.y);
        for k in 0..VERTEX_DOFS {
            x[dofmap.vertex_dof(v, k)] = jet[k];
        }
    }
    for e in 0..mesh.n_edges() {
        let fr = mesh.edge_frame(e);
        let jet = f(fr.midpoint.x, fr.midpoint.y);
        x[dofmap.edge_dof(e)] = fr.normal[0] * jet[1] + fr.normal[1] * jet[2];
    }
    x
}

/// `d^a/dx^a d^b/dy^b` of the finite element function `coeffs` at `point` in triangle `t`.
pub fn evaluate(
    mesh: &Triangulation,
    bases: &[ElementBasis],
    coeffs: &[f64],
    t: usize,
    point: Point2,
    alpha: (usize, usize),
) -> Result<f64> {
    if alpha.0 + alpha.1 > 4 {
        return Err(Error::InvalidInput(format!("derivative order {} > 4", alpha.0 + alpha.1)));
    }
    if !mesh.contains(t, point, 1e-10) {
        return Err(Error::PointOutsideTriangle { tri: t, x: point.x, y: point.y });
    }
    Ok(bases[t].poly(coeffs).deriv(alpha.0, alpha.1, point.x, point.y))
}
