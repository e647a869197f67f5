//! The adaptive loop: solve, estimate, mark, refine.

use std::fmt::Write as _;
use std::time::Instant;

use crate::assembly::{assemble_mass, assemble_stiffness, form_value, reduce, Form};
use crate::eigensolve::{factorize, solve_eigs_with, EigenPair, SolverConfig};
use crate::error::{Error, Result};
use crate::estimator::{local_estimator_form, EstimatorReport};
use crate::mesh::{domain_catalog, BoundaryCondition, BoundarySpec, DomainKind, Point2, Triangulation};
use crate::space::{boundary_constraints, element_bases, eliminate, DofMap, ElementBasis, ReductionMap, SpaceKind};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefineMode {
    Adaptive,
    Uniform,
}

impl std::str::FromStr for RefineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adaptive" => Ok(RefineMode::Adaptive),
            "uniform" | "uniform-red" | "red" => Ok(RefineMode::Uniform),
            _ => Err(Error::InvalidInput(format!("unknown mode `{s}`"))),
        }
    }
}

/// The four subspaces of a single-triangle domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleSpace {
    Clamped,
    SimplySupported,
    VertexValues,
    VertexAndEdgeMeans,
}

impl TriangleSpace {
    pub const ALL: [TriangleSpace; 4] = [
        TriangleSpace::Clamped,
        TriangleSpace::SimplySupported,
        TriangleSpace::VertexValues,
        TriangleSpace::VertexAndEdgeMeans,
    ];

    pub fn code(self) -> char {
        match self {
            TriangleSpace::Clamped => 'C',
            TriangleSpace::SimplySupported => 'S',
            TriangleSpace::VertexValues => 'V',
            TriangleSpace::VertexAndEdgeMeans => 'M',
        }
    }
}

impl std::str::FromStr for TriangleSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" => Ok(TriangleSpace::Clamped),
            "S" | "s" => Ok(TriangleSpace::SimplySupported),
            "V" | "v" => Ok(TriangleSpace::VertexValues),
            "M" | "m" => Ok(TriangleSpace::VertexAndEdgeMeans),
            _ => Err(Error::InvalidInput(format!("unknown space `{s}`, expected C, S, V or M"))),
        }
    }
}

/// Where the constraints of the discrete space come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceChoice {
    /// Boundary conditions of the boundary spec.
    Boundary,
    Triangle(TriangleSpace),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AfemConfig {
    pub domain: DomainKind,
    pub spec: BoundarySpec,
    pub space: SpaceChoice,
    /// Mass form `b_s`, `s` in {0, 1}.
    pub form: u8,
    pub j: usize,
    pub theta: f64,
    pub mode: RefineMode,
    pub init_red: usize,
    pub max_ndof: usize,
    pub max_levels: usize,
    pub solver: SolverConfig,
}

impl AfemConfig {
    pub fn new(domain: DomainKind) -> Self {
        AfemConfig {
            domain,
            spec: BoundarySpec::default_for(domain),
            space: SpaceChoice::Boundary,
            form: 0,
            j: 1,
            theta: 0.5,
            mode: RefineMode::Adaptive,
            init_red: 0,
            max_ndof: 30_000,
            max_levels: 200,
            solver: SolverConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::InvalidInput(format!("theta = {} not in (0, 1)", self.theta)));
        }
        if self.j == 0 {
            return Err(Error::InvalidInput("eigenpair index j starts at 1".into()));
        }
        if self.form > 1 {
            return Err(Error::InvalidInput(format!("form index {} not in {{0, 1}}", self.form)));
        }
        if self.max_levels == 0 {
            return Err(Error::InvalidInput("max_levels must be positive".into()));
        }
        if matches!(self.space, SpaceChoice::Triangle(_)) && !self.domain.is_triangle() {
            return Err(Error::InvalidSpec(format!("{} is not a single-triangle domain", self.domain)));
        }
        Ok(())
    }

    /// Number of eigenpairs solved for per level.
    pub fn n_eigs(&self) -> usize {
        (self.j + 3).max(10)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub level: usize,
    pub ndof: usize,
    pub ntri: usize,
    pub lambda: f64,
    pub eta: f64,
    pub marked: usize,
    pub seconds: f64,
    /// All computed eigenvalues of the level, ascending.
    pub lambdas: Vec<f64>,
}

pub fn records_to_csv(records: &[LevelRecord]) -> String {
    let mut s = String::from("level,ndof,ntri,lambda,eta,marked,seconds\n");
    for r in records {
        writeln!(s, "{},{},{},{:.17e},{:.6e},{},{:.3}", r.level, r.ndof, r.ntri, r.lambda, r.eta, r.marked, r.seconds)
            .unwrap();
    }
    s
}

/// Everything needed to solve on one mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub dofmap: DofMap,
    pub bases: Vec<ElementBasis>,
    pub reduction: ReductionMap,
    pub a: CsrMatrix,
    pub b: CsrMatrix,
}

impl Discretization {
    /// Space and constraints only, without matrices.
    pub fn space(mesh: &Triangulation, kind: &SpaceKind) -> Result<(DofMap, Vec<ElementBasis>, ReductionMap)> {
        let dofmap = DofMap::new(mesh);
        let bases = element_bases(mesh, &dofmap)?;
        let c = boundary_constraints(mesh, &dofmap, &bases, kind)?;
        let reduction = eliminate(&c, dofmap.n);
        Ok((dofmap, bases, reduction))
    }

    pub fn new(mesh: &Triangulation, kind: &SpaceKind, form: u8) -> Result<Self> {
        let (dofmap, bases, reduction) = Self::space(mesh, kind)?;
        Self::with_space(mesh, dofmap, bases, reduction, form)
    }

    fn with_space(
        mesh: &Triangulation,
        dofmap: DofMap,
        bases: Vec<ElementBasis>,
        reduction: ReductionMap,
        form: u8,
    ) -> Result<Self> {
        let a = reduce(&assemble_stiffness(mesh, &dofmap, &bases), &reduction)?;
        let b = reduce(&assemble_mass(mesh, &dofmap, &bases, form)?, &reduction)?;
        Ok(Discretization { dofmap, bases, reduction, a, b })
    }

    pub fn ndof(&self) -> usize {
        self.reduction.n_free
    }

    /// Eigenpairs, retrying once with a perturbed shift if the shift is singular.
    pub fn solve(&self, cfg: &SolverConfig) -> Result<Vec<EigenPair>> {
        let f = match factorize(&self.a, &self.b, cfg.shift) {
            Err(Error::SingularShift(s)) => {
                let cfg = SolverConfig { shift: s + 1e-8 * (1.0 + s), ..cfg.clone() };
                let f = factorize(&self.a, &self.b, cfg.shift)?;
                return solve_eigs_with(&self.a, &self.b, &f, &cfg);
            }
            other => other?,
        };
        solve_eigs_with(&self.a, &self.b, &f, cfg)
    }

    pub fn prolong(&self, pair: &EigenPair) -> Vec<f64> {
        self.reduction.prolong(&pair.vector)
    }

    /// Rayleigh quotient of the pair's function, integrated triangle by triangle.
    pub fn rayleigh_quotient(&self, mesh: &Triangulation, u: &[f64], form: u8) -> Result<f64> {
        let a = form_value(mesh, &self.bases, u, Form::Stiffness);
        let b = form_value(mesh, &self.bases, u, Form::mass(form)?);
        Ok(a / b)
    }

    /// Solves and replaces every eigenvalue by the accurately integrated
    /// Rayleigh quotient of its eigenvector, keeping the ascending order.
    pub fn solve_accurate(&self, mesh: &Triangulation, cfg: &SolverConfig, form: u8) -> Result<Vec<EigenPair>> {
        let mut pairs = self.solve(cfg)?;
        for p in pairs.iter_mut() {
            p.value = self.rayleigh_quotient(mesh, &self.prolong(p), form)?;
        }
        pairs.sort_by(|p, q| p.value.total_cmp(&q.value).then(p.index.cmp(&q.index)));
        for (i, p) in pairs.iter_mut().enumerate() {
            p.index = i + 1;
        }
        Ok(pairs)
    }
}

/// The initial mesh and the constraint kind of a configuration.
pub fn setup(cfg: &AfemConfig) -> Result<(Triangulation, SpaceKind)> {
    cfg.validate()?;
    let spec = match cfg.space {
        SpaceChoice::Boundary => cfg.spec.clone(),
        SpaceChoice::Triangle(TriangleSpace::Clamped) => BoundarySpec::uniform(BoundaryCondition::Clamped),
        SpaceChoice::Triangle(TriangleSpace::SimplySupported) => {
            BoundarySpec::uniform(BoundaryCondition::SimplySupported)
        }
        SpaceChoice::Triangle(_) => BoundarySpec::uniform(BoundaryCondition::Free),
    };
    let domain = domain_catalog(cfg.domain, &spec)?;
    let corners: Vec<Point2> = domain.corners.iter().map(|&v| domain.mesh.points[v]).collect();
    let kind = match cfg.space {
        SpaceChoice::Triangle(TriangleSpace::VertexValues) => SpaceKind::VertexValues(corners),
        SpaceChoice::Triangle(TriangleSpace::VertexAndEdgeMeans) => SpaceKind::VertexAndEdgeMeans(corners),
        _ => SpaceKind::Boundary,
    };
    Ok((domain.mesh.red_refine_n(cfg.init_red)?, kind))
}

/// Minimal-cardinality Dörfler marking: the shortest prefix of the
/// contributions sorted descending (ties by index) carrying `theta` of the sum.
pub fn doerfler_mark(eta2: &[f64], theta: f64) -> Result<Vec<usize>> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidInput(format!("theta = {theta} not in (0, 1)")));
    }
    if eta2.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput("estimator contributions must be finite and nonnegative".into()));
    }
    let total: f64 = eta2.iter().sum();
    if total == 0.0 {
        return Err(Error::AllZeroEstimator);
    }
    let mut order: Vec<usize> = (0..eta2.len()).collect();
    order.sort_by(|&a, &b| eta2[b].total_cmp(&eta2[a]).then(a.cmp(&b)));
    let mut acc = 0.0;
    let mut marked = Vec::new();
    for t in order {
        marked.push(t);
        acc += eta2[t];
        if acc >= theta * total {
            break;
        }
    }
    Ok(marked)
}

/// Result of an AFEM run.
#[derive(Debug, Clone)]
pub struct AfemRun {
    pub records: Vec<LevelRecord>,
    /// Mesh of the last solved level.
    pub mesh: Triangulation,
    /// Eigenpair `j` of the last level, in reduced coordinates.
    pub pair: EigenPair,
    pub report: EstimatorReport,
}

fn at_level(level: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtLevel { level, source: Box::new(e) }
}

pub fn afem_loop(cfg: &AfemConfig) -> Result<AfemRun> {
    afem_loop_with(cfg, |_| {})
}

/// As [`afem_loop`], calling `progress` after every level.
pub fn afem_loop_with<F: FnMut(&LevelRecord)>(cfg: &AfemConfig, mut progress: F) -> Result<AfemRun> {
    let (mut mesh, kind) = setup(cfg)?;
    let k = cfg.n_eigs();
    // a coarse mesh may not carry enough eigenpairs; refine it uniformly first
    let mut space = Discretization::space(&mesh, &kind).map_err(at_level(0))?;
    while space.2.n_free < k {
        mesh = mesh.red_refine().map_err(at_level(0))?;
        mesh.level = 0;
        space = Discretization::space(&mesh, &kind).map_err(at_level(0))?;
    }

    let solver = SolverConfig { k, ..cfg.solver.clone() };
    let mut records: Vec<LevelRecord> = Vec::new();
    let mut level = 0;
    loop {
        let start = Instant::now();
        let err = at_level(level);
        let (dofmap, bases, reduction) = space;
        let disc = Discretization::with_space(&mesh, dofmap, bases, reduction, cfg.form).map_err(&err)?;
        let pairs = disc.solve_accurate(&mesh, &solver, cfg.form).map_err(&err)?;
        let pair = pairs[cfg.j - 1].clone();
        let u = disc.prolong(&pair);
        let report = local_estimator_form(&mesh, &disc.bases, &u, pair.value, cfg.form).map_err(&err)?;

        let marked = match cfg.mode {
            RefineMode::Adaptive => match doerfler_mark(&report.eta2, cfg.theta) {
                Ok(m) => Some(m),
                Err(Error::AllZeroEstimator) => None,
                Err(e) => return Err(err(e)),
            },
            RefineMode::Uniform => Some((0..mesh.n_tris()).collect()),
        };
        let record = LevelRecord {
            level,
            ndof: disc.ndof(),
            ntri: mesh.n_tris(),
            lambda: pair.value,
            eta: report.total(),
            marked: marked.as_ref().map_or(0, |m| m.len()),
            seconds: start.elapsed().as_secs_f64(),
            lambdas: pairs.iter().map(|p| p.value).collect(),
        };
        progress(&record);
        records.push(record);

        let done = |mesh: Triangulation| AfemRun { records: records.clone(), mesh, pair: pair.clone(), report: report.clone() };
        let Some(marked) = marked else {
            return Ok(done(mesh));
        };
        if level + 1 >= cfg.max_levels {
            return Ok(done(mesh));
        }
        let next = match cfg.mode {
            RefineMode::Adaptive => mesh.nvb_refine(&marked),
            RefineMode::Uniform => mesh.red_refine(),
        }
        .map_err(at_level(level + 1))?;
        let next_space = Discretization::space(&next, &kind).map_err(at_level(level + 1))?;
        if next_space.2.n_free > cfg.max_ndof {
            return Ok(done(mesh));
        }
        mesh = next;
        space = next_space;
        level += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub rate: f64,
    /// Levels left out because their error was not positive.
    pub excluded: Vec<usize>,
    pub used: usize,
}

/// Negated least-squares slope of `log(lambda - lambda_ref)` against
/// `log(ndof)` over the last `window` records.
pub fn rate_estimate(records: &[LevelRecord], lambda_ref: f64, window: usize) -> Result<RateFit> {
    let tail = &records[records.len().saturating_sub(window)..];
    let mut excluded = Vec::new();
    let mut pts = Vec::new();
    for r in tail {
        let e = r.lambda - lambda_ref;
        if e > 0.0 {
            pts.push(((r.ndof as f64).ln(), e.ln()));
        } else {
            excluded.push(r.level);
        }
    }
    if pts.len() < 3 {
        if !excluded.is_empty() {
            return Err(Error::NonPositiveError(excluded.len()));
        }
        return Err(Error::InsufficientData(format!("{} usable levels, need 3", pts.len())));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all levels have the same ndof".into()));
    }
    Ok(RateFit { rate: -sxy / sxx, excluded, used: pts.len() })
}
