//! Conforming triangulations with refinement-edge bookkeeping.
//!
//! Local conventions used throughout the crate: triangle vertices are stored
//! counterclockwise, local edge `i` is the edge opposite local vertex `i`, and
//! `ref_edge` names the local edge that newest-vertex bisection splits next.
//! Global edges are oriented from the lower to the higher vertex index.

mod catalog;
mod io;
mod refine;

pub use catalog::{domain_catalog, BoundaryCondition, BoundarySpec, Domain, DomainKind};
pub use io::{read_mesh, write_mesh};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryLabel {
    Interior,
    Clamped,
    SimplySupported,
    Free,
}

impl BoundaryLabel {
    pub fn code(self) -> char {
        match self {
            BoundaryLabel::Interior => 'I',
            BoundaryLabel::Clamped => 'C',
            BoundaryLabel::SimplySupported => 'S',
            BoundaryLabel::Free => 'F',
        }
    }
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for BoundaryLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" => Ok(BoundaryLabel::Clamped),
            "S" => Ok(BoundaryLabel::SimplySupported),
            "F" => Ok(BoundaryLabel::Free),
            "I" => Ok(BoundaryLabel::Interior),
            _ => Err(Error::Parse(format!("unknown boundary label `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    pub v: [usize; 3],
    pub ref_edge: usize,
}

impl Triangle {
    /// Endpoints of local edge `i` (the edge opposite vertex `i`).
    pub fn edge_vertices(&self, i: usize) -> (usize, usize) {
        (self.v[(i + 1) % 3], self.v[(i + 2) % 3])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub lo: usize,
    pub hi: usize,
    pub label: BoundaryLabel,
    /// First adjacent triangle and, for interior edges, the second one.
    pub tris: (usize, Option<usize>),
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.tris.1.is_none()
    }
}

/// Geometric frame of an edge: tangent points from `lo` to `hi`, the normal
/// is the tangent rotated by +90 degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFrame {
    pub tangent: [f64; 2],
    pub normal: [f64; 2],
    pub midpoint: Point2,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    pub points: Vec<Point2>,
    pub tris: Vec<Triangle>,
    pub edges: Vec<Edge>,
    /// Global edge index of every local edge.
    pub tri_edges: Vec<[usize; 3]>,
    /// Refinement generation counter.
    pub level: usize,
}

pub(crate) type LabelMap = HashMap<(usize, usize), BoundaryLabel>;

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Local index of the longest edge; near-ties (relative 1e-12) go to the edge
/// whose opposite vertex has the smallest global index.
pub(crate) fn longest_edge(points: &[Point2], v: [usize; 3]) -> usize {
    let len2 = |i: usize| {
        let a = points[v[(i + 1) % 3]];
        let b = points[v[(i + 2) % 3]];
        (a.x - b.x).powi(2) + (a.y - b.y).powi(2)
    };
    let lens = [len2(0), len2(1), len2(2)];
    let max = lens.iter().cloned().fold(0.0, f64::max);
    (0..3)
        .filter(|&i| lens[i] >= max * (1.0 - 1e-12))
        .min_by_key(|&i| v[i])
        .unwrap()
}

impl Triangulation {
    /// Builds a triangulation from raw input. Triangles may be given in either
    /// orientation; every edge on the boundary needs a (non-interior) label.
    /// Initial refinement edges follow the longest-edge rule.
    pub fn new(
        points: Vec<Point2>,
        tris: &[[usize; 3]],
        boundary: &[(usize, usize, BoundaryLabel)],
    ) -> Result<Self> {
        if let Some(p) = points.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidInput(format!("vertex {p} is not finite")));
        }
        let mut oriented = Vec::with_capacity(tris.len());
        for (t, v) in tris.iter().enumerate() {
            if v.iter().any(|&i| i >= points.len()) {
                return Err(Error::InvalidInput(format!("triangle {t} has an invalid vertex index")));
            }
            let mut v = *v;
            let o = orient(points[v[0]], points[v[1]], points[v[2]]);
            let scale = (0..3)
                .map(|i| points[v[i]].dist(points[v[(i + 1) % 3]]))
                .fold(0.0, f64::max);
            if o.abs() <= 1e-14 * scale * scale || !o.is_finite() {
                return Err(Error::ZeroArea(t));
            }
            if o < 0.0 {
                v.swap(1, 2);
            }
            let ref_edge = longest_edge(&points, v);
            oriented.push(Triangle { v, ref_edge });
        }
        let labels = label_map(boundary)?;
        let mesh = Self::from_parts(points, oriented, &labels, 0)?;
        mesh.check_hanging_vertices()?;
        Ok(mesh)
    }

    /// Convenience constructor labelling every boundary edge alike.
    pub fn with_uniform_boundary(
        points: Vec<Point2>,
        tris: &[[usize; 3]],
        label: BoundaryLabel,
    ) -> Result<Self> {
        let boundary: Vec<_> = boundary_edges_of(tris)
            .into_iter()
            .map(|(a, b)| (a, b, label))
            .collect();
        Self::new(points, tris, &boundary)
    }

    /// Assembles the edge table for oriented triangles with fixed refinement edges.
    pub(crate) fn from_parts(
        points: Vec<Point2>,
        tris: Vec<Triangle>,
        labels: &LabelMap,
        level: usize,
    ) -> Result<Self> {
        let mut incidences: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(3 * tris.len());
        for (t, tri) in tris.iter().enumerate() {
            if tri.ref_edge > 2 {
                return Err(Error::InvalidInput(format!("triangle {t} has refinement edge {}", tri.ref_edge)));
            }
            for i in 0..3 {
                let (a, b) = tri.edge_vertices(i);
                let (lo, hi) = edge_key(a, b);
                incidences.push((lo, hi, t, i));
            }
        }
        incidences.sort_unstable();

        let mut edges: Vec<Edge> = Vec::new();
        let mut tri_edges = vec![[usize::MAX; 3]; tris.len()];
        let mut k = 0;
        while k < incidences.len() {
            let (lo, hi, t0, i0) = incidences[k];
            let mut j = k + 1;
            while j < incidences.len() && incidences[j].0 == lo && incidences[j].1 == hi {
                j += 1;
            }
            let e = edges.len();
            let (second, label) = match j - k {
                1 => {
                    let label = match labels.get(&(lo, hi)) {
                        Some(BoundaryLabel::Interior) => {
                            return Err(Error::InconsistentLabel(format!(
                                "boundary edge ({lo},{hi}) labelled interior"
                            )))
                        }
                        Some(l) => *l,
                        None => {
                            return Err(Error::NonConforming(format!(
                                "edge ({lo},{hi}) has one triangle but no boundary label (hanging vertex?)"
                            )))
                        }
                    };
                    (None, label)
                }
                2 => {
                    match labels.get(&(lo, hi)) {
                        None | Some(BoundaryLabel::Interior) => {}
                        Some(l) => {
                            return Err(Error::InconsistentLabel(format!(
                                "interior edge ({lo},{hi}) labelled {l}"
                            )))
                        }
                    }
                    let (t1, i1) = (incidences[k + 1].2, incidences[k + 1].3);
                    if t1 == t0 {
                        return Err(Error::NonConforming(format!("triangle {t0} repeats edge ({lo},{hi})")));
                    }
                    tri_edges[t1][i1] = e;
                    (Some(t1), BoundaryLabel::Interior)
                }
                n => {
                    return Err(Error::NonConforming(format!("edge ({lo},{hi}) shared by {n} triangles")));
                }
            };
            tri_edges[t0][i0] = e;
            edges.push(Edge { lo, hi, label, tris: (t0, second) });
            k = j;
        }
        // edges come out sorted by (lo, hi)
        for &(lo, hi) in labels.keys() {
            if edges.binary_search_by(|e| (e.lo, e.hi).cmp(&(lo, hi))).is_err() {
                return Err(Error::InconsistentLabel(format!("label on non-edge ({lo},{hi})")));
            }
        }
        Ok(Triangulation { points, tris, edges, tri_edges, level })
    }

    /// Brute-force scan for vertices inside boundary edges; used on input meshes.
    fn check_hanging_vertices(&self) -> Result<()> {
        for e in self.edges.iter().filter(|e| e.is_boundary()) {
            let a = self.points[e.lo];
            let b = self.points[e.hi];
            let len = a.dist(b);
            for (k, p) in self.points.iter().enumerate() {
                if k == e.lo || k == e.hi {
                    continue;
                }
                let cross = orient(a, b, *p);
                if cross.abs() > 1e-12 * len * len {
                    continue;
                }
                let t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len);
                if t > 1e-12 && t < 1.0 - 1e-12 {
                    return Err(Error::NonConforming(format!(
                        "vertex {k} lies inside edge ({},{})",
                        e.lo, e.hi
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_tris(&self) -> usize {
        self.tris.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self, t: usize) -> [Point2; 3] {
        let v = self.tris[t].v;
        [self.points[v[0]], self.points[v[1]], self.points[v[2]]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.vertices(t);
        0.5 * orient(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_tris()).map(|t| self.area(t)).sum()
    }

    /// Longest edge length.
    pub fn diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.vertices(t);
        a.dist(b).max(b.dist(c)).max(c.dist(a))
    }

    pub fn centroid(&self, t: usize) -> Point2 {
        let [a, b, c] = self.vertices(t);
        Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    pub fn edge_frame(&self, e: usize) -> EdgeFrame {
        let edge = &self.edges[e];
        let a = self.points[edge.lo];
        let b = self.points[edge.hi];
        let length = a.dist(b);
        let tangent = [(b.x - a.x) / length, (b.y - a.y) / length];
        EdgeFrame {
            tangent,
            normal: [-tangent[1], tangent[0]],
            midpoint: a.midpoint(b),
            length,
        }
    }

    /// Whether the global edge normal points out of triangle `t`.
    pub fn normal_points_out(&self, e: usize, t: usize) -> bool {
        let f = self.edge_frame(e);
        let c = self.centroid(t);
        (f.midpoint.x - c.x) * f.normal[0] + (f.midpoint.y - c.y) * f.normal[1] > 0.0
    }

    /// Barycentric containment test with relative slack `tol`.
    pub fn contains(&self, t: usize, p: Point2, tol: f64) -> bool {
        let [a, b, c] = self.vertices(t);
        let area2 = orient(a, b, c);
        let l0 = orient(p, b, c) / area2;
        let l1 = orient(a, p, c) / area2;
        let l2 = orient(a, b, p) / area2;
        l0 >= -tol && l1 >= -tol && l2 >= -tol
    }

    /// Boundary edges in ascending edge order.
    pub fn boundary_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_edges()).filter(|&e| self.edges[e].is_boundary())
    }

    pub(crate) fn label_map(&self) -> LabelMap {
        self.edges
            .iter()
            .filter(|e| e.is_boundary())
            .map(|e| ((e.lo, e.hi), e.label))
            .collect()
    }

    /// Re-validates the edge table: adjacency counts, labels, orientation, positivity.
    pub fn validate(&self) -> Result<()> {
        for (t, tri) in self.tris.iter().enumerate() {
            if self.area(t) <= 0.0 {
                return Err(Error::ZeroArea(t));
            }
            for i in 0..3 {
                let e = &self.edges[self.tri_edges[t][i]];
                let (a, b) = tri.edge_vertices(i);
                if edge_key(a, b) != (e.lo, e.hi) {
                    return Err(Error::NonConforming(format!("edge table mismatch at triangle {t}")));
                }
            }
        }
        for e in &self.edges {
            if e.lo >= e.hi {
                return Err(Error::NonConforming("edge orientation".into()));
            }
            match (e.tris.1, e.label) {
                (None, BoundaryLabel::Interior) | (Some(_), BoundaryLabel::Clamped)
                | (Some(_), BoundaryLabel::SimplySupported) | (Some(_), BoundaryLabel::Free) => {
                    return Err(Error::InconsistentLabel(format!("edge ({},{})", e.lo, e.hi)))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Number of distinct similarity classes (sorted angles compared at `tol`).
    pub fn similarity_classes(&self, tol: f64) -> usize {
        let mut classes: Vec<[f64; 3]> = Vec::new();
        for t in 0..self.n_tris() {
            let [a, b, c] = self.vertices(t);
            let ang = |p: Point2, q: Point2, r: Point2| {
                let u = (q.x - p.x, q.y - p.y);
                let v = (r.x - p.x, r.y - p.y);
                (u.0 * v.1 - u.1 * v.0).atan2(u.0 * v.0 + u.1 * v.1).abs()
            };
            let mut angles = [ang(a, b, c), ang(b, c, a), ang(c, a, b)];
            angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
            if !classes
                .iter()
                .any(|c| (0..3).all(|i| (c[i] - angles[i]).abs() <= tol))
            {
                classes.push(angles);
            }
        }
        classes.len()
    }
}

fn label_map(boundary: &[(usize, usize, BoundaryLabel)]) -> Result<LabelMap> {
    let mut map = LabelMap::new();
    for &(a, b, l) in boundary {
        if let Some(old) = map.insert(edge_key(a, b), l) {
            if old != l {
                return Err(Error::InconsistentLabel(format!("edge ({a},{b}) labelled twice")));
            }
        }
    }
    Ok(map)
}

/// Edges used by exactly one triangle, as (lo, hi).
pub fn boundary_edges_of(tris: &[[usize; 3]]) -> Vec<(usize, usize)> {
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for v in tris {
        for i in 0..3 {
            *count.entry(edge_key(v[i], v[(i + 1) % 3])).or_default() += 1;
        }
    }
    let mut out: Vec<_> = count.into_iter().filter(|(_, c)| *c == 1).map(|(k, _)| k).collect();
    out.sort_unstable();
    out
}
