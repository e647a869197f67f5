use std::collections::BTreeMap;

use super::{DofMap, ElementBasis, VERTEX_DOFS};
use crate::assembly::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::mesh::{BoundaryLabel, Point2, Triangulation};

/// A homogeneous constraint `sum_k vals[k] * x[cols[k]] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl SparseRow {
    pub fn unit(col: usize) -> Self {
        SparseRow { cols: vec![col], vals: vec![1.0] }
    }

    pub fn apply(&self, x: &[f64]) -> f64 {
        self.cols.iter().zip(&self.vals).map(|(&c, &v)| v * x[c]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstraintSet {
    pub rows: Vec<SparseRow>,
}

impl ConstraintSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds a row after dropping zero entries; an all-zero row is rejected.
    pub fn push(&mut self, cols: Vec<usize>, vals: Vec<f64>) -> Result<()> {
        let mut row = SparseRow { cols: Vec::new(), vals: Vec::new() };
        for (c, v) in cols.into_iter().zip(vals) {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("non-finite constraint entry on dof {c}")));
            }
            if v != 0.0 {
                row.cols.push(c);
                row.vals.push(v);
            }
        }
        if row.cols.is_empty() {
            return Err(Error::InvalidSpec("empty constraint row".into()));
        }
        self.rows.push(row);
        Ok(())
    }
}

/// Which subspace of the Argyris space to impose.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    /// Conditions from the mesh edge labels (clamped, simply supported, free).
    Boundary,
    /// Functions vanishing at the listed corner points.
    VertexValues(Vec<Point2>),
    /// Vanishing at the corners and with zero mean over each side of the
    /// polygon spanned by the corners, taken in order.
    VertexAndEdgeMeans(Vec<Point2>),
}

/// Value, gradient and Hessian weights of the directional derivatives
/// along `t` and `n`, as rows over the six vertex DOFs.
fn directional_rows(t: [f64; 2], n: [f64; 2], clamped: bool) -> Vec<[f64; 6]> {
    let mut rows = vec![
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, t[0], t[1], 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, t[0] * t[0], 2.0 * t[0] * t[1], t[1] * t[1]],
    ];
    if clamped {
        rows.push([0.0, n[0], n[1], 0.0, 0.0, 0.0]);
        rows.push([0.0, 0.0, 0.0, t[0] * n[0], t[0] * n[1] + t[1] * n[0], t[1] * n[1]]);
    }
    rows
}

/// Keeps the rows that are linearly independent of those before them.
fn independent_rows(rows: &[[f64; 6]]) -> Vec<[f64; 6]> {
    let mut basis: Vec<[f64; 6]> = Vec::new();
    let mut kept = Vec::new();
    for r in rows {
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut w = *r;
        for _ in 0..2 {
            for q in &basis {
                let d: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                for k in 0..6 {
                    w[k] -= d * q[k];
                }
            }
        }
        let wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if wn > 1e-10 * norm {
            basis.push(w.map(|v| v / wn));
            kept.push(*r);
        }
    }
    kept
}

/// Homogeneous constraints defining the discrete space inside the full
/// Argyris space on `mesh`. `bases` is only consulted for edge means.
pub fn boundary_constraints(
    mesh: &Triangulation,
    dofmap: &DofMap,
    bases: &[ElementBasis],
    kind: &SpaceKind,
) -> Result<ConstraintSet> {
    let mut set = ConstraintSet::default();
    match kind {
        SpaceKind::Boundary => {
            let mut per_vertex: BTreeMap<usize, Vec<[f64; 6]>> = BTreeMap::new();
            for e in mesh.boundary_edges() {
                let edge = &mesh.edges[e];
                let clamped = match edge.label {
                    BoundaryLabel::Clamped => true,
                    BoundaryLabel::SimplySupported => false,
                    BoundaryLabel::Free => continue,
                    BoundaryLabel::Interior => {
                        return Err(Error::InvalidSpec(format!("boundary edge {e} labelled interior")))
                    }
                };
                let f = mesh.edge_frame(e);
                for v in [edge.lo, edge.hi] {
                    per_vertex.entry(v).or_default().extend(directional_rows(f.tangent, f.normal, clamped));
                }
                if clamped {
                    set.push(vec![dofmap.edge_dof(e)], vec![1.0])?;
                }
            }
            for (v, rows) in per_vertex {
                for r in independent_rows(&rows) {
                    let cols = (0..VERTEX_DOFS).map(|k| dofmap.vertex_dof(v, k)).collect();
                    set.push(cols, r.to_vec())?;
                }
            }
        }
        SpaceKind::VertexValues(corners) | SpaceKind::VertexAndEdgeMeans(corners) => {
            if corners.len() < 3 {
                return Err(Error::InvalidSpec(format!("{} corners given", corners.len())));
            }
            for c in corners {
                let v = find_vertex(mesh, *c)?;
                set.push(vec![dofmap.vertex_dof(v, 0)], vec![1.0])?;
            }
            if matches!(kind, SpaceKind::VertexAndEdgeMeans(_)) {
                for i in 0..corners.len() {
                    let (a, b) = (corners[i], corners[(i + 1) % corners.len()]);
                    let (cols, vals) = side_mean_row(mesh, dofmap, bases, a, b)?;
                    set.push(cols, vals)?;
                }
            }
        }
    }
    Ok(set)
}

fn find_vertex(mesh: &Triangulation, p: Point2) -> Result<usize> {
    let scale = mesh.points.iter().fold(1.0f64, |m, q| m.max(q.x.abs()).max(q.y.abs()));
    mesh.points
        .iter()
        .position(|q| q.dist(p) <= 1e-12 * scale)
        .ok_or_else(|| Error::InvalidSpec(format!("corner ({}, {}) is not a mesh vertex", p.x, p.y)))
}

/// Row of `int_{[a,b]} d_n v ds` over the mesh edges lying on the segment
/// `[a, b]`, with `n` the unit normal of the segment rotated clockwise from
/// `b - a`. Together with the corner values these are the Morley degrees of
/// freedom.
fn side_mean_row(
    mesh: &Triangulation,
    dofmap: &DofMap,
    bases: &[ElementBasis],
    a: Point2,
    b: Point2,
) -> Result<(Vec<usize>, Vec<f64>)> {
    let len = a.dist(b);
    let on_side = |p: Point2| {
        let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        let s = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len);
        cross.abs() <= 1e-12 * len * len && (-1e-12..=1.0 + 1e-12).contains(&s)
    };
    let normal = [(b.y - a.y) / len, -(b.x - a.x) / len];
    let (gx, gw) = gauss_legendre(6);
    let mut acc = vec![0.0; dofmap.n];
    let mut touched = vec![false; dofmap.n];
    let mut found = 0.0;
    for e in mesh.boundary_edges() {
        let edge = &mesh.edges[e];
        let (p, q) = (mesh.points[edge.lo], mesh.points[edge.hi]);
        if !(on_side(p) && on_side(q)) {
            continue;
        }
        let basis = &bases[edge.tris.0];
        let el = p.dist(q);
        found += el;
        for i in 0..basis.dofs.len() {
            let phi = basis.basis_poly(i);
            let s: f64 = gx
                .iter()
                .zip(&gw)
                .map(|(&t, &w)| {
                    let (x, y) = (p.x + t * (q.x - p.x), p.y + t * (q.y - p.y));
                    w * (normal[0] * phi.deriv(1, 0, x, y) + normal[1] * phi.deriv(0, 1, x, y))
                })
                .sum();
            let d = basis.dofs[i];
            acc[d] += basis.signs[i] * el * s;
            touched[d] = true;
        }
    }
    if (found - len).abs() > 1e-9 * len {
        return Err(Error::InvalidSpec(format!(
            "mesh edges cover {found} of a side of length {len}"
        )));
    }
    let max = acc.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for (d, &v) in acc.iter().enumerate() {
        if touched[d] && v.abs() >= 1e-14 * max {
            cols.push(d);
            vals.push(v);
        }
    }
    Ok((cols, vals))
}
