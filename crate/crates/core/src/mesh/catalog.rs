//! Initial meshes of the benchmark domains.

use std::fmt;
use std::str::FromStr;

use super::{BoundaryLabel, Point2, Triangulation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Square,
    LShape,
    Drum1,
    Drum2,
    RectHole,
    TriEquilateral,
    TriRightIsosceles,
    Tri906030,
}

impl DomainKind {
    pub const ALL: [DomainKind; 8] = [
        DomainKind::Square,
        DomainKind::LShape,
        DomainKind::Drum1,
        DomainKind::Drum2,
        DomainKind::RectHole,
        DomainKind::TriEquilateral,
        DomainKind::TriRightIsosceles,
        DomainKind::Tri906030,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Square => "square",
            DomainKind::LShape => "lshape",
            DomainKind::Drum1 => "drum1",
            DomainKind::Drum2 => "drum2",
            DomainKind::RectHole => "rect-hole",
            DomainKind::TriEquilateral => "tri-equilateral",
            DomainKind::TriRightIsosceles => "tri-right-isosceles",
            DomainKind::Tri906030 => "tri-90-60-30",
        }
    }

    pub fn is_triangle(self) -> bool {
        matches!(
            self,
            DomainKind::TriEquilateral | DomainKind::TriRightIsosceles | DomainKind::Tri906030
        )
    }

    pub fn has_hole(self) -> bool {
        self == DomainKind::RectHole
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DomainKind::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::UnknownDomain(s.to_string()))
    }
}

/// Essential condition on one boundary component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Clamped,
    SimplySupported,
    Free,
}

impl BoundaryCondition {
    pub fn label(self) -> BoundaryLabel {
        match self {
            BoundaryCondition::Clamped => BoundaryLabel::Clamped,
            BoundaryCondition::SimplySupported => BoundaryLabel::SimplySupported,
            BoundaryCondition::Free => BoundaryLabel::Free,
        }
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clamped" | "C" => Ok(BoundaryCondition::Clamped),
            "simply-supported" | "simply" | "ss" | "S" => Ok(BoundaryCondition::SimplySupported),
            "free" | "F" => Ok(BoundaryCondition::Free),
            _ => Err(Error::InvalidBoundarySpec(format!("unknown boundary condition `{s}`"))),
        }
    }
}

/// Condition per boundary component: `outer` for every domain, `inner` only
/// for domains with a hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySpec {
    pub outer: BoundaryCondition,
    pub inner: Option<BoundaryCondition>,
}

impl BoundarySpec {
    pub fn uniform(bc: BoundaryCondition) -> Self {
        BoundarySpec { outer: bc, inner: None }
    }

    /// The default pairing of a domain: clamped everywhere, except the
    /// rectangle with a hole (free outside, clamped hole).
    pub fn default_for(kind: DomainKind) -> Self {
        if kind.has_hole() {
            BoundarySpec {
                outer: BoundaryCondition::Free,
                inner: Some(BoundaryCondition::Clamped),
            }
        } else {
            BoundarySpec::uniform(BoundaryCondition::Clamped)
        }
    }
}

/// An initial mesh plus the polygon corners (vertex indices, stable under refinement).
#[derive(Debug, Clone)]
pub struct Domain {
    pub kind: DomainKind,
    pub mesh: Triangulation,
    /// Corners of the outer polygon in counterclockwise order.
    pub corners: Vec<usize>,
}

/// Builds the initial triangulation of a catalog domain.
///
/// The drums use right-isosceles tiles with legs of length 2 on the lattice
/// spanned by the lines `x, y` odd, `x = y (mod 4)` and `x + y = 2 (mod 4)`,
/// on which `cos(pi x/2) sin(pi y) - cos(pi y/2) sin(pi x)` vanishes.
pub fn domain_catalog(kind: DomainKind, spec: &BoundarySpec) -> Result<Domain> {
    if spec.inner.is_some() && !kind.has_hole() {
        return Err(Error::InvalidBoundarySpec(format!(
            "{kind} has no inner boundary component"
        )));
    }
    let s3 = 3f64.sqrt();
    let (pts, tris, corners): (Vec<(f64, f64)>, Vec<[usize; 3]>, Vec<usize>) = match kind {
        DomainKind::Square => (
            vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
            vec![[0, 1, 2], [0, 2, 3]],
            vec![0, 1, 2, 3],
        ),
        DomainKind::LShape => (
            vec![
                (-1.0, -1.0),
                (0.0, -1.0),
                (1.0, -1.0),
                (-1.0, 0.0),
                (0.0, 0.0),
                (1.0, 0.0),
                (-1.0, 1.0),
                (0.0, 1.0),
            ],
            vec![[0, 1, 4], [0, 4, 3], [1, 2, 4], [2, 5, 4], [3, 4, 6], [4, 7, 6]],
            vec![0, 2, 5, 4, 7, 6],
        ),
        DomainKind::Drum1 => (
            vec![
                (-3.0, -1.0),
                (-1.0, -1.0),
                (-3.0, 1.0),
                (-1.0, 1.0),
                (1.0, 1.0),
                (-1.0, 3.0),
                (-3.0, 3.0),
                (-5.0, 3.0),
                (-3.0, 5.0),
            ],
            vec![[0, 1, 2], [1, 3, 2], [1, 4, 3], [2, 3, 5], [2, 5, 6], [6, 5, 8], [7, 6, 8]],
            vec![0, 1, 4, 3, 5, 8, 7, 6, 2],
        ),
        DomainKind::Drum2 => (
            vec![
                (-1.0, -1.0),
                (1.0, 1.0),
                (-1.0, 1.0),
                (-3.0, 1.0),
                (-1.0, 3.0),
                (1.0, 3.0),
                (3.0, 3.0),
                (1.0, 5.0),
                (3.0, 5.0),
            ],
            vec![[0, 1, 2], [3, 2, 4], [2, 1, 4], [1, 5, 4], [1, 6, 5], [5, 6, 7], [6, 8, 7]],
            vec![0, 1, 6, 8, 7, 5, 4, 3, 2],
        ),
        DomainKind::RectHole => return rect_hole(spec),
        DomainKind::TriEquilateral => (
            vec![(0.0, 0.0), (1.0, 0.0), (0.5, 0.5 * s3)],
            vec![[0, 1, 2]],
            vec![0, 1, 2],
        ),
        DomainKind::TriRightIsosceles => (
            vec![(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)],
            vec![[0, 1, 2]],
            vec![0, 1, 2],
        ),
        DomainKind::Tri906030 => (
            vec![(0.0, 0.0), (1.0, 0.0), (0.25, 0.25 * s3)],
            vec![[0, 1, 2]],
            vec![0, 1, 2],
        ),
    };
    let points = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
    let mesh = Triangulation::with_uniform_boundary(points, &tris, spec.outer.label())?;
    let corners = drop_straight_corners(&mesh, corners);
    Ok(Domain { kind, mesh, corners })
}

/// R = (-1,3) x (-1,4) minus [0,1]^2 on the unit grid, every cell split along
/// its (x,y)-(x+1,y+1) diagonal.
fn rect_hole(spec: &BoundarySpec) -> Result<Domain> {
    let inner = spec.inner.unwrap_or(BoundaryCondition::Clamped);
    let nx = 5; // x = -1..=3
    let ny = 6; // y = -1..=4
    let id = |i: usize, j: usize| j * nx + i;
    let mut points = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            points.push(Point2::new(i as f64 - 1.0, j as f64 - 1.0));
        }
    }
    let mut tris = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            if i == 1 && j == 1 {
                continue; // the hole [0,1]^2
            }
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    let hole = [id(1, 1), id(2, 1), id(2, 2), id(1, 2)];
    let mut boundary = Vec::new();
    for (a, b) in super::boundary_edges_of(&tris) {
        let on_hole = hole.contains(&a) && hole.contains(&b);
        let bc = if on_hole { inner } else { spec.outer };
        boundary.push((a, b, bc.label()));
    }
    let mesh = Triangulation::new(points, &tris, &boundary)?;
    let corners = vec![id(0, 0), id(4, 0), id(4, 5), id(0, 5)];
    Ok(Domain { kind: DomainKind::RectHole, mesh, corners })
}

/// Removes polygon vertices with a straight angle (none expected for the catalog).
fn drop_straight_corners(mesh: &Triangulation, corners: Vec<usize>) -> Vec<usize> {
    let n = corners.len();
    (0..n)
        .filter(|&k| {
            let p = mesh.points[corners[(k + n - 1) % n]];
            let q = mesh.points[corners[k]];
            let r = mesh.points[corners[(k + 1) % n]];
            let cross = (q.x - p.x) * (r.y - q.y) - (q.y - p.y) * (r.x - q.x);
            cross.abs() > 1e-12
        })
        .map(|k| corners[k])
        .collect()
}
