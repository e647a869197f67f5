use std::collections::HashMap;

use super::{edge_key, longest_edge, LabelMap, Point2, Triangle, Triangulation};
use crate::error::{Error, Result};

impl Triangulation {
    /// Newest-vertex bisection of the marked triangles plus the conformity closure.
    ///
    /// Every triangle owning a marked edge gets its refinement edge marked
    /// too, until the set of marked edges is closed; each triangle is then
    /// bisected recursively along marked refinement edges. Children replace
    /// their parent in place (parent order preserved) and new vertices are
    /// numbered by ascending edge index, so the output is deterministic.
    pub fn nvb_refine(&self, marked: &[usize]) -> Result<Triangulation> {
        if marked.is_empty() {
            return Err(Error::InvalidInput("no triangles marked".into()));
        }
        if let Some(&t) = marked.iter().find(|&&t| t >= self.n_tris()) {
            return Err(Error::InvalidInput(format!("marked triangle {t} out of range")));
        }
        let mut edge_marked = vec![false; self.n_edges()];
        let mut work = Vec::new();
        for &t in marked {
            let e = self.tri_edges[t][self.tris[t].ref_edge];
            if !edge_marked[e] {
                edge_marked[e] = true;
                work.push(e);
            }
        }
        // closure: a triangle with any marked edge needs its refinement edge marked
        while let Some(e) = work.pop() {
            let (t0, t1) = self.edges[e].tris;
            for t in std::iter::once(t0).chain(t1) {
                let r = self.tri_edges[t][self.tris[t].ref_edge];
                if !edge_marked[r] {
                    edge_marked[r] = true;
                    work.push(r);
                }
            }
        }

        let mut points = self.points.clone();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut labels: LabelMap = self.label_map();
        for (e, _) in edge_marked.iter().enumerate().filter(|(_, m)| **m) {
            let edge = &self.edges[e];
            let m = points.len();
            points.push(points[edge.lo].midpoint(points[edge.hi]));
            mids.insert((edge.lo, edge.hi), m);
            if let Some(l) = labels.remove(&(edge.lo, edge.hi)) {
                labels.insert(edge_key(edge.lo, m), l);
                labels.insert(edge_key(m, edge.hi), l);
            }
        }

        let mut tris = Vec::with_capacity(self.n_tris() + 2 * mids.len());
        for tri in &self.tris {
            bisect(*tri, &mids, &mut tris);
        }
        let out = Triangulation::from_parts(points, tris, &labels, self.level + 1)?;
        Ok(out)
    }

    /// Red refinement: every triangle splits into four congruent children by
    /// joining edge midpoints. The midpoint of edge `e` gets vertex index
    /// `n_points + e`; refinement edges are reassigned by the longest-edge rule.
    pub fn red_refine(&self) -> Result<Triangulation> {
        let n = self.n_points();
        let mut points = self.points.clone();
        points.extend(
            self.edges
                .iter()
                .map(|e| self.points[e.lo].midpoint(self.points[e.hi])),
        );
        let mut labels = LabelMap::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.is_boundary() {
                labels.insert(edge_key(edge.lo, n + e), edge.label);
                labels.insert(edge_key(n + e, edge.hi), edge.label);
            }
        }
        let mut tris = Vec::with_capacity(4 * self.n_tris());
        for (t, tri) in self.tris.iter().enumerate() {
            let [a, b, c] = tri.v;
            // midpoints opposite a, b, c
            let ma = n + self.tri_edges[t][0];
            let mb = n + self.tri_edges[t][1];
            let mc = n + self.tri_edges[t][2];
            for v in [[a, mc, mb], [mc, b, ma], [mb, ma, c], [ma, mb, mc]] {
                tris.push(Triangle { v, ref_edge: longest_edge(&points, v) });
            }
        }
        Triangulation::from_parts(points, tris, &labels, self.level + 1)
    }

    /// `n` successive red refinements.
    pub fn red_refine_n(&self, n: usize) -> Result<Triangulation> {
        let mut m = self.clone();
        for _ in 0..n {
            m = m.red_refine()?;
        }
        Ok(m)
    }

    /// Indices of triangles whose three vertices all lie within `radius` of `p`.
    pub fn triangles_near(&self, p: Point2, radius: f64) -> usize {
        (0..self.n_tris())
            .filter(|&t| self.vertices(t).iter().all(|q| q.dist(p) <= radius))
            .count()
    }
}

fn bisect(tri: Triangle, mids: &HashMap<(usize, usize), usize>, out: &mut Vec<Triangle>) {
    let r = tri.ref_edge;
    let a = tri.v[r];
    let b = tri.v[(r + 1) % 3];
    let c = tri.v[(r + 2) % 3];
    match mids.get(&edge_key(b, c)) {
        Some(&m) => {
            bisect(Triangle { v: [m, a, b], ref_edge: 0 }, mids, out);
            bisect(Triangle { v: [m, c, a], ref_edge: 0 }, mids, out);
        }
        None => out.push(tri),
    }
}
