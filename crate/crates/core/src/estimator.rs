//! Residual a posteriori estimator for the biharmonic eigenproblem with
//! mixed clamped, simply supported and free boundaries.
//!
//! Per triangle `T`:
//!
//! ```text
//! eta^2(T) = |T|^2   ||lambda u - Delta^2 u||^2_T
//!          + |T|^1/2 ||[d_nn u]||^2 over edges not clamped
//!          + |T|^3/2 ||[d_ttn u + d_n Delta u]||^2 over edges neither clamped nor simply supported
//! ```
//!
//! Brackets are jumps on interior edges and one-sided traces on boundary
//! edges. On interior edges `d_ttn u` is continuous (the normal derivative is
//! continuous along the edge), so only the jump of `d_n Delta u` is taken.
//!
//! For the mass form `b_1(u, v) = (grad u, grad v)` the volume residual is
//! `-lambda Delta u - Delta^2 u` and the one-sided boundary trace gains
//! `lambda d_n u`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::assembly::{gauss_legendre, triangle_quadrature};
use crate::error::{Error, Result};
use crate::mesh::{BoundaryLabel, Triangulation};
use crate::space::poly::LocalPoly;
use crate::space::ElementBasis;

const VOLUME_DEGREE: usize = 10;
const EDGE_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimatorReport {
    /// `eta^2(T)` per triangle.
    pub eta2: Vec<f64>,
    pub vol: Vec<f64>,
    pub nu_nu: Vec<f64>,
    pub nu_lap: Vec<f64>,
}

impl EstimatorReport {
    pub fn sum(&self) -> f64 {
        self.eta2.iter().sum()
    }

    /// `sqrt(sum_T eta^2(T))`
    pub fn total(&self) -> f64 {
        estimator_total(self)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("tri_index,eta2,vol_term,nu_nu_term,nu_lap_term\n");
        for t in 0..self.eta2.len() {
            writeln!(s, "{t},{:e},{:e},{:e},{:e}", self.eta2[t], self.vol[t], self.nu_nu[t], self.nu_lap[t]).unwrap();
        }
        s
    }
}

pub fn estimator_total(report: &EstimatorReport) -> f64 {
    report.sum().sqrt()
}

/// Second and third normal/tangential derivatives along an edge.
struct EdgeTrace {
    n: f64,
    nn: f64,
    ttn: f64,
    n_lap: f64,
}

fn edge_trace(p: &LocalPoly, t: [f64; 2], n: [f64; 2], x: f64, y: f64) -> EdgeTrace {
    let d1 = p.derivs_of_order(1, x, y);
    let d2 = p.derivs_of_order(2, x, y);
    let d3 = p.derivs_of_order(3, x, y);
    let nn = n[0] * n[0] * d2[0] + 2.0 * n[0] * n[1] * d2[1] + n[1] * n[1] * d2[2];
    // symmetric third-order tensor contracted with (t, t, n)
    let f = |i: usize, j: usize, k: usize| d3[i + j + k];
    let v = [t, t, n];
    let mut ttn = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                ttn += v[0][i] * v[1][j] * v[2][k] * f(i, j, k);
            }
        }
    }
    let n_lap = n[0] * (d3[0] + d3[2]) + n[1] * (d3[1] + d3[3]);
    EdgeTrace { n: n[0] * d1[0] + n[1] * d1[1], nn, ttn, n_lap }
}

/// Per-triangle estimator contributions of the discrete eigenpair
/// `(lambda, u)`, with `u` given by its full (unreduced) DOF vector.
pub fn local_estimator(mesh: &Triangulation, bases: &[ElementBasis], u: &[f64], lambda: f64) -> Result<EstimatorReport> {
    local_estimator_form(mesh, bases, u, lambda, 0)
}

/// As [`local_estimator`] for the eigenproblem with mass form `b_s`.
pub fn local_estimator_form(
    mesh: &Triangulation,
    bases: &[ElementBasis],
    u: &[f64],
    lambda: f64,
    form: u8,
) -> Result<EstimatorReport> {
    if form > 1 {
        return Err(Error::InvalidInput(format!("form index {form} not in {{0, 1}}")));
    }
    let n = bases.iter().flat_map(|b| b.dofs.iter()).max().map_or(0, |d| d + 1);
    if bases.len() != mesh.n_tris() || u.len() != n {
        return Err(Error::InconsistentPair(format!(
            "{} coefficients for {} triangles",
            u.len(),
            mesh.n_tris()
        )));
    }
    let rule = triangle_quadrature(VOLUME_DEGREE)?;
    let (gx, gw) = gauss_legendre(EDGE_POINTS);
    let polys: Vec<LocalPoly> = bases.par_iter().map(|b| b.poly(u)).collect();

    let terms: Vec<[f64; 3]> = (0..mesh.n_tris())
        .into_par_iter()
        .map(|t| {
            let area = mesh.area(t);
            let p = &polys[t];
            let [a, b, c] = mesh.vertices(t);
            let mut vol = 0.0;
            for (l, &w) in rule.points.iter().zip(&rule.weights) {
                let x = l[0] * a.x + l[1] * b.x + l[2] * c.x;
                let y = l[0] * a.y + l[1] * b.y + l[2] * c.y;
                let mass = if form == 0 {
                    p.value(x, y)
                } else {
                    let d2 = p.derivs_of_order(2, x, y);
                    -(d2[0] + d2[2])
                };
                let r = lambda * mass - p.bilaplacian(x, y);
                vol += w * r * r;
            }
            vol *= area * area * area;

            let (mut nu_nu, mut nu_lap) = (0.0, 0.0);
            for &e in &mesh.tri_edges[t] {
                let edge = &mesh.edges[e];
                let (with_nn, with_lap) = match edge.label {
                    BoundaryLabel::Clamped => continue,
                    BoundaryLabel::SimplySupported => (true, false),
                    BoundaryLabel::Free | BoundaryLabel::Interior => (true, true),
                };
                let other = match edge.tris {
                    (t0, Some(t1)) => Some(if t0 == t { t1 } else { t0 }),
                    _ => None,
                };
                let f = mesh.edge_frame(e);
                let (pa, pb) = (mesh.points[edge.lo], mesh.points[edge.hi]);
                let (mut jnn, mut jlap) = (0.0, 0.0);
                for (&s, &w) in gx.iter().zip(&gw) {
                    let (x, y) = (pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y));
                    let mine = edge_trace(p, f.tangent, f.normal, x, y);
                    let (dnn, dlap) = match other {
                        Some(o) => {
                            let theirs = edge_trace(&polys[o], f.tangent, f.normal, x, y);
                            (mine.nn - theirs.nn, mine.n_lap - theirs.n_lap)
                        }
                        None if form == 0 => (mine.nn, mine.ttn + mine.n_lap),
                        None => (mine.nn, mine.ttn + mine.n_lap + lambda * mine.n),
                    };
                    jnn += w * dnn * dnn;
                    jlap += w * dlap * dlap;
                }
                if with_nn {
                    nu_nu += area.sqrt() * f.length * jnn;
                }
                if with_lap {
                    nu_lap += area * area.sqrt() * f.length * jlap;
                }
            }
            [vol, nu_nu, nu_lap]
        })
        .collect();

    let mut report = EstimatorReport::default();
    for [v, a, b] in terms {
        report.eta2.push(v + a + b);
        report.vol.push(v);
        report.nu_nu.push(a);
        report.nu_lap.push(b);
    }
    Ok(report)
}
