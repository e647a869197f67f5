//! Plain-text mesh format.
//!
//! ```text
//! vertices N
//! x y            (N lines)
//! triangles M
//! v0 v1 v2 r     (M lines, r = local refinement edge)
//! edges K
//! lo hi L        (K boundary edges, L in {C, S, F})
//! ```
//! Coordinates use Rust's shortest round-trip formatting, so a write/read
//! cycle reproduces the mesh bit for bit.

use std::fmt::Write as _;

use super::{LabelMap, Point2, Triangle, Triangulation};
use crate::error::{Error, Result};

pub fn write_mesh(mesh: &Triangulation) -> String {
    let mut s = String::new();
    writeln!(s, "vertices {}", mesh.n_points()).unwrap();
    for p in &mesh.points {
        writeln!(s, "{:?} {:?}", p.x, p.y).unwrap();
    }
    writeln!(s, "triangles {}", mesh.n_tris()).unwrap();
    for t in &mesh.tris {
        writeln!(s, "{} {} {} {}", t.v[0], t.v[1], t.v[2], t.ref_edge).unwrap();
    }
    let boundary: Vec<_> = mesh.boundary_edges().collect();
    writeln!(s, "edges {}", boundary.len()).unwrap();
    for e in boundary {
        let edge = &mesh.edges[e];
        writeln!(s, "{} {} {}", edge.lo, edge.hi, edge.label).unwrap();
    }
    s
}

pub fn read_mesh(text: &str) -> Result<Triangulation> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut next = |what: &str| lines.next().ok_or_else(|| Error::Parse(format!("missing {what}")));
    let count = |line: &str, key: &str| -> Result<usize> {
        let mut it = line.split_whitespace();
        if it.next() != Some(key) {
            return Err(Error::Parse(format!("expected `{key} <count>`, got `{line}`")));
        }
        it.next()
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad count in `{line}`")))
    };
    let fields = |line: &str, n: usize| -> Result<Vec<String>> {
        let f: Vec<String> = line.split_whitespace().map(String::from).collect();
        if f.len() != n {
            return Err(Error::Parse(format!("expected {n} fields in `{line}`")));
        }
        Ok(f)
    };
    let parse_err = |s: &str| Error::Parse(format!("bad number `{s}`"));

    let nv = count(next("vertex header")?, "vertices")?;
    let mut points = Vec::with_capacity(nv);
    for _ in 0..nv {
        let f = fields(next("vertex")?, 2)?;
        let x: f64 = f[0].parse().map_err(|_| parse_err(&f[0]))?;
        let y: f64 = f[1].parse().map_err(|_| parse_err(&f[1]))?;
        points.push(Point2::new(x, y));
    }
    let nt = count(next("triangle header")?, "triangles")?;
    let mut tris = Vec::with_capacity(nt);
    for _ in 0..nt {
        let f = fields(next("triangle")?, 4)?;
        let mut v = [0usize; 4];
        for (k, s) in f.iter().enumerate() {
            v[k] = s.parse().map_err(|_| parse_err(s))?;
        }
        if v[..3].iter().any(|&i| i >= nv) {
            return Err(Error::InvalidInput("triangle references unknown vertex".into()));
        }
        tris.push(Triangle { v: [v[0], v[1], v[2]], ref_edge: v[3] });
    }
    let ne = count(next("edge header")?, "edges")?;
    let mut labels = LabelMap::new();
    for _ in 0..ne {
        let f = fields(next("edge")?, 3)?;
        let a: usize = f[0].parse().map_err(|_| parse_err(&f[0]))?;
        let b: usize = f[1].parse().map_err(|_| parse_err(&f[1]))?;
        labels.insert(super::edge_key(a, b), f[2].parse()?);
    }
    let mesh = Triangulation::from_parts(points, tris, &labels, 0)?;
    mesh.validate()?;
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{domain_catalog, BoundarySpec, DomainKind};

    #[test]
    fn round_trip_is_bit_exact() {
        for k in DomainKind::ALL {
            let d = domain_catalog(k, &BoundarySpec::default_for(k)).unwrap();
            let m = d.mesh.red_refine().unwrap().nvb_refine(&[0, 3]).unwrap();
            let text = write_mesh(&m);
            let back = read_mesh(&text).unwrap();
            assert_eq!(back.tris, m.tris);
            assert_eq!(back.edges, m.edges);
            for (p, q) in back.points.iter().zip(&m.points) {
                assert_eq!(p.x.to_bits(), q.x.to_bits());
                assert_eq!(p.y.to_bits(), q.y.to_bits());
            }
            assert_eq!(write_mesh(&back), text);
        }
    }

    #[test]
    fn malformed_input() {
        assert!(read_mesh("vertices 1\n0 0\n").is_err());
        assert!(read_mesh("vertices 1\n0 zero\ntriangles 0\nedges 0\n").is_err());
        assert!(read_mesh("vertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 5 0\nedges 0\n").is_err());
    }
}
