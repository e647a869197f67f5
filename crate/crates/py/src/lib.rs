//! Python bindings: meshes, run configurations, the adaptive loop, the
//! eigen-solver on assembled matrices, and the reference tables.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use biharm::afem::{self, AfemConfig, Discretization, LevelRecord, RefineMode, SpaceChoice, TriangleSpace};
use biharm::cli::parse_bc;
use biharm::constants::{self, ConstantsSpec, TriangleShape};
use biharm::eigensolve::SolverConfig;
use biharm::mesh::{domain_catalog, BoundarySpec, DomainKind, Triangulation};
use biharm::space::SpaceKind;
use biharm::sparse::CsrMatrix;
use biharm::{reference, Error};

create_exception!(pybiharm, BiharmError, PyException);

fn err(e: Error) -> PyErr {
    BiharmError::new_err(e.to_string())
}

fn spec_for(domain: DomainKind, bc: Option<&str>) -> PyResult<BoundarySpec> {
    match bc {
        Some(s) => parse_bc(s).map_err(err),
        None => Ok(BoundarySpec::default_for(domain)),
    }
}

#[pyclass(name = "Mesh", frozen)]
#[derive(Clone)]
struct PyMesh {
    inner: Triangulation,
}

#[pymethods]
impl PyMesh {
    /// Initial mesh of a catalog domain.
    #[staticmethod]
    #[pyo3(signature = (name, bc=None))]
    fn catalog(name: &str, bc: Option<&str>) -> PyResult<Self> {
        let kind: DomainKind = name.parse().map_err(err)?;
        let d = domain_catalog(kind, &spec_for(kind, bc)?).map_err(err)?;
        Ok(PyMesh { inner: d.mesh })
    }

    #[getter]
    fn n_points(&self) -> usize {
        self.inner.n_points()
    }

    #[getter]
    fn n_tris(&self) -> usize {
        self.inner.n_tris()
    }

    #[getter]
    fn n_edges(&self) -> usize {
        self.inner.n_edges()
    }

    #[getter]
    fn level(&self) -> usize {
        self.inner.level
    }

    fn total_area(&self) -> f64 {
        self.inner.total_area()
    }

    fn points(&self) -> Vec<(f64, f64)> {
        self.inner.points.iter().map(|p| (p.x, p.y)).collect()
    }

    /// Vertex triples, counterclockwise.
    fn triangles(&self) -> Vec<[usize; 3]> {
        self.inner.tris.iter().map(|t| t.v).collect()
    }

    fn red_refine(&self) -> PyResult<Self> {
        Ok(PyMesh { inner: self.inner.red_refine().map_err(err)? })
    }

    fn nvb_refine(&self, marked: Vec<usize>) -> PyResult<Self> {
        Ok(PyMesh { inner: self.inner.nvb_refine(&marked).map_err(err)? })
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Mesh(points={}, triangles={}, level={})", self.inner.n_points(), self.inner.n_tris(), self.inner.level)
    }
}

#[pyclass(name = "Config", frozen)]
#[derive(Clone)]
struct PyConfig {
    inner: AfemConfig,
}

#[pymethods]
impl PyConfig {
    #[new]
    #[pyo3(signature = (
        domain, bc=None, j=1, theta=0.5, mode="adaptive", init_red=0, max_ndof=30_000,
        max_levels=200, space=None, form=0, shift=0.0, tol=1e-10, seed=0
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        domain: &str,
        bc: Option<&str>,
        j: usize,
        theta: f64,
        mode: &str,
        init_red: usize,
        max_ndof: usize,
        max_levels: usize,
        space: Option<&str>,
        form: u8,
        shift: f64,
        tol: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let kind: DomainKind = domain.parse().map_err(err)?;
        let mut cfg = AfemConfig::new(kind);
        cfg.spec = spec_for(kind, bc)?;
        cfg.j = j;
        cfg.theta = theta;
        cfg.mode = mode.parse::<RefineMode>().map_err(err)?;
        cfg.init_red = init_red;
        cfg.max_ndof = max_ndof;
        cfg.max_levels = max_levels;
        if let Some(s) = space {
            cfg.space = SpaceChoice::Triangle(s.parse::<TriangleSpace>().map_err(err)?);
        }
        cfg.form = form;
        cfg.solver = SolverConfig { shift, tol, seed, ..SolverConfig::default() };
        cfg.validate().map_err(err)?;
        Ok(PyConfig { inner: cfg })
    }

    #[getter]
    fn domain(&self) -> &'static str {
        self.inner.domain.name()
    }

    #[getter]
    fn j(&self) -> usize {
        self.inner.j
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta
    }

    #[getter]
    fn max_ndof(&self) -> usize {
        self.inner.max_ndof
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyclass(name = "LevelRecord", frozen, get_all)]
#[derive(Clone)]
struct PyLevelRecord {
    level: usize,
    ndof: usize,
    ntri: usize,
    eigenvalue: f64,
    eta: f64,
    marked: usize,
    seconds: f64,
    eigenvalues: Vec<f64>,
}

impl From<&LevelRecord> for PyLevelRecord {
    fn from(r: &LevelRecord) -> Self {
        PyLevelRecord {
            level: r.level,
            ndof: r.ndof,
            ntri: r.ntri,
            eigenvalue: r.lambda,
            eta: r.eta,
            marked: r.marked,
            seconds: r.seconds,
            eigenvalues: r.lambdas.clone(),
        }
    }
}

#[pymethods]
impl PyLevelRecord {
    fn __repr__(&self) -> String {
        format!("LevelRecord(level={}, ndof={}, eigenvalue={:.15e}, eta={:.3e})", self.level, self.ndof, self.eigenvalue, self.eta)
    }
}

#[pyclass(name = "AfemRun", frozen)]
struct PyAfemRun {
    records: Vec<LevelRecord>,
    mesh: Triangulation,
    eta2: Vec<f64>,
    vector: Vec<f64>,
}

#[pymethods]
impl PyAfemRun {
    #[getter]
    fn records(&self) -> Vec<PyLevelRecord> {
        self.records.iter().map(PyLevelRecord::from).collect()
    }

    /// Eigenvalue `j` of the last level.
    #[getter]
    fn eigenvalue(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.lambda)
    }

    /// All eigenvalues of the last level.
    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.records.last().map_or_else(Vec::new, |r| r.lambdas.clone())
    }

    /// Estimator contributions per triangle of the last level.
    #[getter]
    fn eta2(&self) -> Vec<f64> {
        self.eta2.clone()
    }

    /// Eigenvector in reduced coordinates, B-normalized.
    #[getter]
    fn eigenvector(&self) -> Vec<f64> {
        self.vector.clone()
    }

    #[getter]
    fn mesh(&self) -> PyMesh {
        PyMesh { inner: self.mesh.clone() }
    }

    fn to_csv(&self) -> String {
        afem::records_to_csv(&self.records)
    }
}

/// Runs the adaptive (or uniform) loop; the interpreter lock is released meanwhile.
#[pyfunction]
fn afem_loop(py: Python<'_>, config: &PyConfig) -> PyResult<PyAfemRun> {
    let cfg = config.inner.clone();
    let run = py.detach(move || afem::afem_loop(&cfg)).map_err(err)?;
    Ok(PyAfemRun { records: run.records, mesh: run.mesh, eta2: run.report.eta2, vector: run.pair.vector })
}

type Coo = (Vec<usize>, Vec<usize>, Vec<f64>);

fn coo(m: &CsrMatrix) -> Coo {
    let mut out = (Vec::with_capacity(m.nnz()), Vec::with_capacity(m.nnz()), Vec::with_capacity(m.nnz()));
    for i in 0..m.nrows {
        let (cols, vals) = m.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            out.0.push(i);
            out.1.push(j);
            out.2.push(v);
        }
    }
    out
}

fn discretize(domain: &str, bc: Option<&str>, init_red: usize, form: u8) -> PyResult<Discretization> {
    let kind: DomainKind = domain.parse().map_err(err)?;
    let d = domain_catalog(kind, &spec_for(kind, bc)?).map_err(err)?;
    let mesh = d.mesh.red_refine_n(init_red).map_err(err)?;
    Discretization::new(&mesh, &SpaceKind::Boundary, form).map_err(err)
}

/// Reduced stiffness and mass matrices as `(n, (rows, cols, vals), (rows, cols, vals))`.
#[pyfunction]
#[pyo3(signature = (domain, bc=None, init_red=0, form=0))]
fn assemble(domain: &str, bc: Option<&str>, init_red: usize, form: u8) -> PyResult<(usize, Coo, Coo)> {
    let disc = discretize(domain, bc, init_red, form)?;
    Ok((disc.ndof(), coo(&disc.a), coo(&disc.b)))
}

/// The `k` eigenvalues nearest `shift` on a uniformly refined catalog mesh,
/// with their relative residuals.
#[pyfunction]
#[pyo3(signature = (domain, bc=None, init_red=0, k=10, shift=0.0, form=0))]
fn solve_eigs(
    py: Python<'_>,
    domain: &str,
    bc: Option<&str>,
    init_red: usize,
    k: usize,
    shift: f64,
    form: u8,
) -> PyResult<Vec<(f64, f64)>> {
    let disc = discretize(domain, bc, init_red, form)?;
    let cfg = SolverConfig { k, shift, ..SolverConfig::default() };
    let pairs = py.detach(move || biharm::eigensolve::solve_eigs(&disc.a, &disc.b, &cfg)).map_err(err)?;
    Ok(pairs.iter().map(|p| (p.value, p.residual)).collect())
}

#[pyfunction]
fn doerfler_mark(eta2: Vec<f64>, theta: f64) -> PyResult<Vec<usize>> {
    afem::doerfler_mark(&eta2, theta).map_err(err)
}

/// Reference value of eigenvalue `j` of a benchmark, as printed.
#[pyfunction]
#[pyo3(signature = (benchmark, j=1))]
fn reference_value(benchmark: &str, j: usize) -> PyResult<&'static str> {
    reference::lookup(benchmark, j).map(|e| e.text).map_err(err)
}

#[pyfunction]
fn benchmark_ids() -> Vec<&'static str> {
    reference::benchmark_ids().collect()
}

#[pyfunction]
fn interpolation_constant(lambda_min: f64, s: u8) -> PyResult<f64> {
    constants::interpolation_constant(lambda_min, s).map_err(err)
}

/// Principal eigenvalue on a triangle of diameter 1.
#[pyfunction]
#[pyo3(signature = (shape, space, s, max_ndof=constants::DEFAULT_BUDGET))]
fn principal_eigenvalue(py: Python<'_>, shape: &str, space: &str, s: u8, max_ndof: usize) -> PyResult<f64> {
    let spec = ConstantsSpec::new(
        shape.parse::<TriangleShape>().map_err(err)?,
        space.parse::<TriangleSpace>().map_err(err)?,
        s,
    );
    py.detach(move || constants::principal_eigenvalue(&spec, max_ndof)).map(|r| r.0).map_err(err)
}

#[pymodule]
fn pybiharm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("BiharmError", m.py().get_type::<BiharmError>())?;
    m.add_class::<PyMesh>()?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PyLevelRecord>()?;
    m.add_class::<PyAfemRun>()?;
    m.add_function(wrap_pyfunction!(afem_loop, m)?)?;
    m.add_function(wrap_pyfunction!(assemble, m)?)?;
    m.add_function(wrap_pyfunction!(solve_eigs, m)?)?;
    m.add_function(wrap_pyfunction!(doerfler_mark, m)?)?;
    m.add_function(wrap_pyfunction!(reference_value, m)?)?;
    m.add_function(wrap_pyfunction!(benchmark_ids, m)?)?;
    m.add_function(wrap_pyfunction!(interpolation_constant, m)?)?;
    m.add_function(wrap_pyfunction!(principal_eigenvalue, m)?)?;
    Ok(())
}
