//! Checks shared by the acceptance binary and the integration tests. Every
//! check returns a short summary on success and a description of the first
//! violation otherwise.

#![allow(dead_code)]

use biharm::afem::{afem_loop, doerfler_mark, AfemConfig, Discretization};
use biharm::assembly::triangle_quadrature;
use biharm::eigensolve::{solve_eigs, SolverConfig};
use biharm::estimator::local_estimator;
use biharm::mesh::{domain_catalog, BoundaryCondition, BoundaryLabel, BoundarySpec, DomainKind, Point2, Triangulation};
use biharm::space::{element_bases, evaluate, interpolate, DofMap, SpaceKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

/// Random bivariate quintic with analytic derivatives.
pub struct Quintic {
    /// `c[a][b]` multiplies `x^a y^b`, `a + b <= 5`.
    c: [[f64; 6]; 6],
}

impl Quintic {
    pub fn random(r: &mut ChaCha8Rng) -> Self {
        let mut c = [[0.0; 6]; 6];
        for a in 0..6 {
            for b in 0..6 - a {
                c[a][b] = r.gen_range(-1.0..1.0);
            }
        }
        Quintic { c }
    }

    fn falling(n: usize, k: usize) -> f64 {
        (0..k).map(|i| (n - i) as f64).product()
    }

    pub fn deriv(&self, da: usize, db: usize, x: f64, y: f64) -> f64 {
        let mut s = 0.0;
        for a in da..6 {
            for b in db..6 - a {
                s += self.c[a][b] * Self::falling(a, da) * Self::falling(b, db) * x.powi((a - da) as i32) * y.powi((b - db) as i32);
            }
        }
        s
    }

    pub fn jet(&self, x: f64, y: f64) -> [f64; 6] {
        [
            self.deriv(0, 0, x, y),
            self.deriv(1, 0, x, y),
            self.deriv(0, 1, x, y),
            self.deriv(2, 0, x, y),
            self.deriv(1, 1, x, y),
            self.deriv(0, 2, x, y),
        ]
    }
}

fn random_triangle(r: &mut ChaCha8Rng) -> Triangulation {
    loop {
        let p: Vec<Point2> = (0..3).map(|_| Point2::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0))).collect();
        let area = ((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[1].y - p[0].y) * (p[2].x - p[0].x)).abs() / 2.0;
        let diam = p[0].dist(p[1]).max(p[1].dist(p[2])).max(p[2].dist(p[0]));
        // keep the minimum angle reasonable
        if area > 0.1 * diam * diam {
            return Triangulation::with_uniform_boundary(p, &[[0, 1, 2]], BoundaryLabel::Free).unwrap();
        }
    }
}

fn random_point_in(mesh: &Triangulation, t: usize, r: &mut ChaCha8Rng) -> Point2 {
    let [a, b, c] = mesh.vertices(t);
    let (mut s, mut u) = (r.gen_range(0.0..1.0), r.gen_range(0.0..1.0));
    if s + u > 1.0 {
        s = 1.0 - s;
        u = 1.0 - u;
    }
    Point2::new(a.x + s * (b.x - a.x) + u * (c.x - a.x), a.y + s * (b.y - a.y) + u * (c.y - a.y))
}

/// A graded mesh of the L-shape: one red refinement plus two rounds of
/// newest-vertex bisection at the reentrant corner.
pub fn graded_lshape(bc: BoundaryCondition) -> Triangulation {
    let d = domain_catalog(DomainKind::LShape, &BoundarySpec::uniform(bc)).unwrap();
    let mut m = d.mesh.red_refine().unwrap();
    for _ in 0..2 {
        let near: Vec<usize> = (0..m.n_tris()).filter(|&t| m.vertices(t).iter().any(|p| p.x.abs() + p.y.abs() < 1e-12)).collect();
        m = m.nvb_refine(&near).unwrap();
    }
    m
}

/// Nodal duality `D = I` and reproduction of quintics, on random triangles
/// and on a graded mesh.
pub fn duality_and_p5(seed: u64) -> Check {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    let mut meshes: Vec<Triangulation> = (0..20).map(|_| random_triangle(&mut r)).collect();
    meshes.push(graded_lshape(BoundaryCondition::Free));
    for mesh in &meshes {
        let dm = DofMap::new(mesh);
        let bases = element_bases(mesh, &dm).map_err(|e| e.to_string())?;
        for b in &bases {
            let d = b.duality_matrix(mesh);
            for i in 0..21 {
                for j in 0..21 {
                    let dev = (d[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs();
                    worst = worst.max(dev);
                    if dev > 1e-8 {
                        return Err(format!("duality entry ({i}, {j}) off by {dev:e} on triangle {}", b.tri));
                    }
                }
            }
        }
        let q = Quintic::random(&mut r);
        let u = interpolate(mesh, &dm, |x, y| q.jet(x, y));
        for t in 0..mesh.n_tris() {
            for _ in 0..3 {
                let p = random_point_in(mesh, t, &mut r);
                for (a, b) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 1), (0, 4)] {
                    let got = evaluate(mesh, &bases, &u, t, p, (a, b)).map_err(|e| e.to_string())?;
                    let want = q.deriv(a, b, p.x, p.y);
                    if !close(got, want, 1e-8) {
                        return Err(format!("quintic derivative ({a}, {b}) at ({}, {}): {got} vs {want}", p.x, p.y));
                    }
                }
            }
        }
    }
    Ok(format!("{} meshes, max duality deviation {worst:.1e}", meshes.len()))
}

/// Value and gradient agree across interior edges; the Hessian agrees at
/// vertices, for random coefficient vectors.
pub fn c1_and_c2(seed: u64) -> Check {
    let mut r = rng(seed);
    let mesh = graded_lshape(BoundaryCondition::Free);
    let dm = DofMap::new(&mesh);
    let bases = element_bases(&mesh, &dm).map_err(|e| e.to_string())?;
    let mut samples = 0;
    for _ in 0..3 {
        let u: Vec<f64> = (0..dm.n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let ev = |t: usize, p: Point2, a: (usize, usize)| evaluate(&mesh, &bases, &u, t, p, a).unwrap();
        for (e, edge) in mesh.edges.iter().enumerate() {
            let (t0, Some(t1)) = edge.tris else { continue };
            let (p, q) = (mesh.points[edge.lo], mesh.points[edge.hi]);
            for s in [0.1, 0.37, 0.5, 0.81] {
                let x = Point2::new(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y));
                for a in [(0, 0), (1, 0), (0, 1)] {
                    let (v0, v1) = (ev(t0, x, a), ev(t1, x, a));
                    samples += 1;
                    if !close(v0, v1, 1e-8) {
                        return Err(format!("edge {e}: derivative {a:?} jumps {v0} vs {v1}"));
                    }
                }
            }
        }
        for v in 0..mesh.n_points() {
            let around: Vec<usize> = (0..mesh.n_tris()).filter(|&t| mesh.tris[t].v.contains(&v)).collect();
            let x = mesh.points[v];
            for a in [(2, 0), (1, 1), (0, 2)] {
                let first = ev(around[0], x, a);
                for &t in &around[1..] {
                    samples += 1;
                    if !close(first, ev(t, x, a), 1e-8) {
                        return Err(format!("vertex {v}: second derivative {a:?} differs between triangles"));
                    }
                }
            }
        }
    }
    Ok(format!("{samples} sampled comparisons"))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Every rule integrates every monomial up to its degree exactly on the
/// reference triangle, where `int x^a y^b = a! b! / (a + b + 2)!`.
pub fn quadrature_exactness() -> Check {
    let mut count = 0;
    for degree in 0..=20 {
        let rule = triangle_quadrature(degree).map_err(|e| e.to_string())?;
        for a in 0..=degree {
            for b in 0..=degree - a {
                let q: f64 = 0.5 * rule.points.iter().zip(&rule.weights).map(|(l, w)| w * l[1].powi(a as i32) * l[2].powi(b as i32)).sum::<f64>();
                let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                count += 1;
                if (q - exact).abs() > 1e-14 * exact.max(1e-3) {
                    return Err(format!("degree-{degree} rule misses x^{a} y^{b}: {q:e} vs {exact:e}"));
                }
            }
        }
    }
    Ok(format!("{count} monomials over degrees 0..=20"))
}

/// Zero cases of the estimator, and the mixed-boundary estimator against an
/// independent evaluation of the interior-jump formula on a clamped mesh.
pub fn estimator_cases(seed: u64) -> Check {
    // P1 with free boundary: every term vanishes
    let free = graded_lshape(BoundaryCondition::Free);
    let dm = DofMap::new(&free);
    let bases = element_bases(&free, &dm).unwrap();
    let u = interpolate(&free, &dm, |x, y| [2.0 * x - 3.0 * y + 0.5, 2.0, -3.0, 0.0, 0.0, 0.0]);
    let r = local_estimator(&free, &bases, &u, 0.0).map_err(|e| e.to_string())?;
    let p1_max = r.eta2.iter().cloned().fold(0.0, f64::max);
    if p1_max > 1e-20 {
        return Err(format!("P1 estimator not zero: {p1_max:e}"));
    }

    // x^4 on a clamped mesh: only the volume term 576 |T|^3 remains
    let clamped = graded_lshape(BoundaryCondition::Clamped);
    let dm = DofMap::new(&clamped);
    let bases = element_bases(&clamped, &dm).unwrap();
    let u = interpolate(&clamped, &dm, |x, _| [x.powi(4), 4.0 * x.powi(3), 0.0, 12.0 * x * x, 0.0, 0.0]);
    let r = local_estimator(&clamped, &bases, &u, 0.0).map_err(|e| e.to_string())?;
    for t in 0..clamped.n_tris() {
        let want = 576.0 * clamped.area(t).powi(3);
        if !close(r.vol[t], want, 1e-9) || r.nu_nu[t] > 1e-14 * want || r.nu_lap[t] > 1e-14 * want {
            return Err(format!("x^4 on triangle {t}: vol {} (want {want}), jumps {} {}", r.vol[t], r.nu_nu[t], r.nu_lap[t]));
        }
    }

    // random function: compare with the pure-clamped formula
    let mut g = rng(seed);
    let u: Vec<f64> = (0..dm.n).map(|_| g.gen_range(-1.0..1.0)).collect();
    let lambda = 37.5;
    let r = local_estimator(&clamped, &bases, &u, lambda).map_err(|e| e.to_string())?;
    let oracle = clamped_oracle(&clamped, &bases, &u, lambda);
    let mut worst: f64 = 0.0;
    for t in 0..clamped.n_tris() {
        let dev = (r.eta2[t] - oracle[t]).abs() / oracle[t];
        worst = worst.max(dev);
        if dev > 1e-10 {
            return Err(format!("triangle {t}: estimator {} vs formula {}", r.eta2[t], oracle[t]));
        }
    }
    Ok(format!("zero cases exact, clamped formula max rel. deviation {worst:.1e}"))
}

/// `|T|^2 ||lambda u - D^4 u||^2 + sum over interior edges of
/// |T|^1/2 ||[d_nn u]||^2 + |T|^3/2 ||[d_n Delta u]||^2`, evaluated pointwise
/// through `evaluate` with a degree-20 volume rule and 10-point edge rule.
fn clamped_oracle(mesh: &Triangulation, bases: &[biharm::space::ElementBasis], u: &[f64], lambda: f64) -> Vec<f64> {
    let rule = triangle_quadrature(20).unwrap();
    let (gx, gw) = biharm::assembly::gauss_legendre(10);
    let d = |t: usize, p: Point2, a: usize, b: usize| evaluate(mesh, bases, u, t, p, (a, b)).unwrap();
    (0..mesh.n_tris())
        .map(|t| {
            let area = mesh.area(t);
            let [a, b, c] = mesh.vertices(t);
            let mut vol = 0.0;
            for (l, w) in rule.points.iter().zip(&rule.weights) {
                let p = Point2::new(l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y);
                let bilap = d(t, p, 4, 0) + 2.0 * d(t, p, 2, 2) + d(t, p, 0, 4);
                vol += w * (lambda * d(t, p, 0, 0) - bilap).powi(2);
            }
            let mut eta2 = area * area * area * vol;
            for &e in &mesh.tri_edges[t] {
                let edge = &mesh.edges[e];
                let (t0, Some(t1)) = edge.tris else { continue };
                let other = if t0 == t { t1 } else { t0 };
                let (p, q) = (mesh.points[edge.lo], mesh.points[edge.hi]);
                let len = p.dist(q);
                let n = [(q.y - p.y) / len, -(q.x - p.x) / len];
                let (mut jnn, mut jlap) = (0.0, 0.0);
                for (s, w) in gx.iter().zip(&gw) {
                    let x = Point2::new(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y));
                    let nn = |t| n[0] * n[0] * d(t, x, 2, 0) + 2.0 * n[0] * n[1] * d(t, x, 1, 1) + n[1] * n[1] * d(t, x, 0, 2);
                    let nlap = |t| n[0] * (d(t, x, 3, 0) + d(t, x, 1, 2)) + n[1] * (d(t, x, 2, 1) + d(t, x, 0, 3));
                    jnn += w * (nn(t) - nn(other)).powi(2);
                    jlap += w * (nlap(t) - nlap(other)).powi(2);
                }
                eta2 += area.sqrt() * len * jnn + area.powf(1.5) * len * jlap;
            }
            eta2
        })
        .collect()
}

/// Marked sets have minimal cardinality among all subsets reaching the bulk.
pub fn doerfler_bruteforce(seed: u64) -> Check {
    let mut r = rng(seed);
    let mut cases = 0;
    for n in 1..=12 {
        for _ in 0..25 {
            let eta2: Vec<f64> = (0..n).map(|_| if r.gen_bool(0.15) { 0.0 } else { r.gen_range(0.0..1.0f64).powi(3) }).collect();
            let theta = r.gen_range(0.01..0.99);
            let total: f64 = eta2.iter().sum();
            let marked = match doerfler_mark(&eta2, theta) {
                Ok(m) => m,
                Err(_) if total == 0.0 => continue,
                Err(e) => return Err(e.to_string()),
            };
            let mut best = usize::MAX;
            for mask in 0u32..(1 << n) {
                let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| eta2[i]).sum();
                if s >= theta * total {
                    best = best.min(mask.count_ones() as usize);
                }
            }
            let mut uniq = marked.clone();
            uniq.sort();
            uniq.dedup();
            let s: f64 = marked.iter().map(|&i| eta2[i]).sum();
            cases += 1;
            if uniq.len() != marked.len() || s < theta * total || marked.len() != best {
                return Err(format!("eta2 {eta2:?}, theta {theta}: marked {marked:?}, minimum {best}"));
            }
        }
    }
    Ok(format!("{cases} random cases with |T| <= 12"))
}

fn sorted(mut v: [usize; 3]) -> [usize; 3] {
    v.sort();
    v
}

/// Refined meshes are conforming and no marked triangle survives.
pub fn nvb_marked_refined(seed: u64) -> Check {
    let mut r = rng(seed);
    let mut steps = 0;
    for kind in [DomainKind::Square, DomainKind::LShape, DomainKind::RectHole, DomainKind::Drum1] {
        let d = domain_catalog(kind, &BoundarySpec::default_for(kind)).unwrap();
        let mut m = d.mesh;
        let area = m.total_area();
        for _ in 0..8 {
            let marked: Vec<usize> = (0..m.n_tris()).filter(|_| r.gen_bool(0.2)).collect();
            let marked = if marked.is_empty() { vec![r.gen_range(0..m.n_tris())] } else { marked };
            let next = m.nvb_refine(&marked).map_err(|e| e.to_string())?;
            next.validate().map_err(|e| format!("{kind}: {e}"))?;
            let after: std::collections::HashSet<[usize; 3]> = next.tris.iter().map(|t| sorted(t.v)).collect();
            if let Some(&t) = marked.iter().find(|&&t| after.contains(&sorted(m.tris[t].v))) {
                return Err(format!("{kind}: marked triangle {t} survived refinement"));
            }
            if !close(next.total_area(), area, 1e-13) {
                return Err(format!("{kind}: area changed"));
            }
            m = next;
            steps += 1;
        }
    }
    Ok(format!("{steps} random refinement steps"))
}

/// Returned eigenvectors are B-orthonormal and A-orthogonal.
pub fn eigenvector_orthogonality() -> Check {
    let mut worst_b: f64 = 0.0;
    let mut worst_a: f64 = 0.0;
    let cases = [(DomainKind::Square, BoundaryCondition::Clamped), (DomainKind::LShape, BoundaryCondition::SimplySupported)];
    for (kind, bc) in cases {
        let d = domain_catalog(kind, &BoundarySpec::uniform(bc)).unwrap();
        let mesh = d.mesh.red_refine_n(2).unwrap();
        let disc = Discretization::new(&mesh, &SpaceKind::Boundary, 0).map_err(|e| e.to_string())?;
        let pairs = solve_eigs(&disc.a, &disc.b, &SolverConfig::with_k(10)).map_err(|e| e.to_string())?;
        for (i, p) in pairs.iter().enumerate() {
            for (j, q) in pairs.iter().enumerate() {
                let b = disc.b.bilinear(&p.vector, &q.vector);
                let db = (b - if i == j { 1.0 } else { 0.0 }).abs();
                worst_b = worst_b.max(db);
                if db > 1e-8 {
                    return Err(format!("{kind}: x_{i}^T B x_{j} = {b}"));
                }
                if i != j {
                    let a = disc.a.bilinear(&p.vector, &q.vector).abs() / p.value.max(q.value);
                    worst_a = worst_a.max(a);
                    if a > 1e-6 {
                        return Err(format!("{kind}: x_{i}^T A x_{j} relative {a:e}"));
                    }
                }
            }
        }
    }
    Ok(format!("max B deviation {worst_b:.1e}, max relative A coupling {worst_a:.1e}"))
}

/// Two runs of the whole pipeline agree bit for bit.
pub fn determinism() -> Check {
    let cfg = AfemConfig { max_ndof: 3000, ..AfemConfig::new(DomainKind::LShape) };
    let a = afem_loop(&cfg).map_err(|e| e.to_string())?;
    let b = afem_loop(&cfg).map_err(|e| e.to_string())?;
    let key = |r: &biharm::afem::LevelRecord| (r.level, r.ndof, r.ntri, r.lambda.to_bits(), r.eta.to_bits(), r.marked);
    if a.records.len() != b.records.len() || a.records.iter().zip(&b.records).any(|(x, y)| key(x) != key(y)) {
        return Err("level histories differ".into());
    }
    if a.mesh != b.mesh || a.pair.vector != b.pair.vector || a.report != b.report {
        return Err("final mesh, eigenvector or estimator differ".into());
    }
    Ok(format!("{} identical levels", a.records.len()))
}

/// Dense generalized symmetric eigenvalues: Cholesky `B = L L^T`, then cyclic
/// Jacobi on `L^-1 A L^-T`. Ascending.
pub fn dense_eigenvalues(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut s = b[j][j];
        for k in 0..j {
            s -= l[j][k] * l[j][k];
        }
        assert!(s > 0.0, "mass matrix not positive definite");
        l[j][j] = s.sqrt();
        for i in j + 1..n {
            let mut s = b[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / l[j][j];
        }
    }
    // C = L^-1 A L^-T: solve columnwise
    let solve_l = |rhs: &[f64]| {
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = rhs[i];
            for k in 0..i {
                s -= l[i][k] * y[k];
            }
            y[i] = s / l[i][i];
        }
        y
    };
    let w: Vec<Vec<f64>> = (0..n).map(|j| solve_l(&(0..n).map(|i| a[i][j]).collect::<Vec<_>>())).collect();
    // w[j] is column j of L^-1 A; rows of (L^-1 A)^T give L^-1 (L^-1 A)^T
    let mut c: Vec<Vec<f64>> = (0..n).map(|i| solve_l(&(0..n).map(|j| w[j][i]).collect::<Vec<_>>())).collect();
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (c[i][j] + c[j][i]);
            c[i][j] = m;
            c[j][i] = m;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| c[i][j] * c[i][j]).sum();
        let diag: f64 = (0..n).map(|i| c[i][i] * c[i][i]).sum();
        if off <= 1e-30 * diag {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if c[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (c[q][q] - c[p][p]) / (2.0 * c[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (ckp, ckq) = (c[k][p], c[k][q]);
                    c[k][p] = cs * ckp - sn * ckq;
                    c[k][q] = sn * ckp + cs * ckq;
                }
                for k in 0..n {
                    let (cpk, cqk) = (c[p][k], c[q][k]);
                    c[p][k] = cs * cpk - sn * cqk;
                    c[q][k] = sn * cpk + cs * cqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| c[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Reads the `n nnz` / `i j v` coordinate files into a dense matrix.
pub fn read_coordinate_dense(text: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    let head: Vec<usize> = lines.next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect();
    let n = head[0];
    let mut m = vec![vec![0.0; n]; n];
    let mut count = 0;
    for l in lines.filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = l.split_whitespace().collect();
        let (i, j, v): (usize, usize, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap());
        m[i][j] += v;
        count += 1;
    }
    assert_eq!(count, head[1]);
    m
}

/// `solve_eigs` against the dense oracle on the clamped square, on the
/// finest uniform mesh with at most 400 free DOFs.
pub fn dense_oracle(dir: &std::path::Path) -> Check {
    let d = domain_catalog(DomainKind::Square, &BoundarySpec::uniform(BoundaryCondition::Clamped)).unwrap();
    let mut mesh = d.mesh.red_refine().unwrap();
    let mut disc = Discretization::new(&mesh, &SpaceKind::Boundary, 0).map_err(|e| e.to_string())?;
    loop {
        let finer = mesh.red_refine().unwrap();
        let next = Discretization::new(&finer, &SpaceKind::Boundary, 0).map_err(|e| e.to_string())?;
        if next.ndof() > 400 {
            break;
        }
        mesh = finer;
        disc = next;
    }
    let (pa, pb) = (dir.join("A.coo"), dir.join("B.coo"));
    std::fs::write(&pa, disc.a.to_coordinate_text()).map_err(|e| e.to_string())?;
    std::fs::write(&pb, disc.b.to_coordinate_text()).map_err(|e| e.to_string())?;
    let a = read_coordinate_dense(&std::fs::read_to_string(&pa).unwrap());
    let b = read_coordinate_dense(&std::fs::read_to_string(&pb).unwrap());
    let dense = dense_eigenvalues(&a, &b);
    let pairs = solve_eigs(&disc.a, &disc.b, &SolverConfig::with_k(10)).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (p, &want) in pairs.iter().zip(&dense) {
        let rel = (p.value - want).abs() / want;
        worst = worst.max(rel);
        if rel > 1e-9 {
            return Err(format!("lambda_{}: {} vs dense {}", p.index, p.value, want));
        }
    }
    Ok(format!("ndof {}, max rel. deviation {worst:.1e}", disc.ndof()))
}
