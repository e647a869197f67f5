//! Shift-invert block Lanczos for `A x = lambda B x` with symmetric
//! positive definite `A` and `B`.
//!
//! The Krylov basis of `(A - sigma B)^{-1} B` is kept B-orthonormal with
//! full reorthogonalization; eigenpairs are extracted by Rayleigh-Ritz with
//! `A` itself, so every Ritz value is an upper bound of the matching
//! discrete eigenvalue.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, Lu};
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::{dot, norm2, CsrMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub shift: f64,
    pub k: usize,
    pub tol: f64,
    /// Largest Krylov basis; `None` picks a size from `k`.
    pub max_dim: Option<usize>,
    pub block: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { shift: 0.0, k: 10, tol: 1e-10, max_dim: None, block: 3, seed: 0 }
    }
}

impl SolverConfig {
    pub fn with_k(k: usize) -> Self {
        SolverConfig { k, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Reduced coordinates, B-normalized.
    pub vector: Vec<f64>,
    /// Position in the ascending enumeration, starting at 1.
    pub index: usize,
    pub residual: f64,
    /// Residual that rounding alone would produce, see [`residual_floor`],
    /// raised to the noise level shared by the computed set.
    pub floor: f64,
}

impl EigenPair {
    /// Residual within tolerance, or at the rounding floor when the
    /// tolerance is not attainable in double precision.
    pub fn converged(&self, tol: f64) -> bool {
        self.residual <= tol || self.residual <= FLOOR_FACTOR * self.floor
    }
}

/// Residuals this close to the rounding floor are accepted.
pub const FLOOR_FACTOR: f64 = 4.0;

enum Factor {
    Cholesky(Llt<usize, f64>),
    Lu(Lu<usize, f64>),
}

/// Sparse direct factorization of `A - sigma B`.
pub struct Factorization {
    factor: Factor,
    n: usize,
}

impl std::fmt::Debug for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.factor {
            Factor::Cholesky(_) => "cholesky",
            Factor::Lu(_) => "lu",
        };
        write!(f, "Factorization({kind}, n = {})", self.n)
    }
}

fn shifted(a: &CsrMatrix, b: &CsrMatrix, sigma: f64, lower_only: bool) -> Vec<Triplet<usize, usize, f64>> {
    let mut trip = Vec::with_capacity(a.nnz() + b.nnz());
    for (m, s) in [(a, 1.0), (b, -sigma)] {
        if s == 0.0 {
            continue;
        }
        for i in 0..m.nrows {
            let (cols, vals) = m.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if !lower_only || j <= i {
                    trip.push(Triplet::new(i, j, s * v));
                }
            }
        }
    }
    trip
}

impl Factorization {
    pub fn new(a: &CsrMatrix, b: &CsrMatrix, sigma: f64) -> Result<Self> {
        let n = a.nrows;
        if a.ncols != n || b.nrows != n || b.ncols != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.nrows, a.ncols, b.nrows, b.ncols
            )));
        }
        let build = |lower| {
            SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &shifted(a, b, sigma, lower))
                .map_err(|e| Error::InvalidInput(format!("sparse matrix: {e:?}")))
        };
        let lower = build(true)?;
        let factor = match lower.sp_cholesky(Side::Lower) {
            Ok(llt) => Factor::Cholesky(llt),
            Err(_) => match build(false)?.sp_lu() {
                Ok(lu) => Factor::Lu(lu),
                Err(_) => return Err(Error::SingularShift(sigma)),
            },
        };
        let f = Factorization { factor, n };
        // an indefinite shift at an eigenvalue leaves a (numerically) zero pivot
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let r: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y = Mat::from_fn(n, 1, |i, _| r[i]);
        f.solve_mat(&mut y);
        let y: Vec<f64> = (0..n).map(|i| y[(i, 0)]).collect();
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularShift(sigma));
        }
        if matches!(f.factor, Factor::Lu(_)) {
            let res: Vec<f64> = a.mul_vec(&y).iter().zip(b.mul_vec(&y)).zip(&r).map(|((p, q), r)| p - sigma * q - r).collect();
            if norm2(&res) > 1e-6 * norm2(&r) {
                return Err(Error::SingularShift(sigma));
            }
        }
        Ok(f)
    }

    pub fn is_cholesky(&self) -> bool {
        matches!(self.factor, Factor::Cholesky(_))
    }

    fn solve_mat(&self, rhs: &mut Mat<f64>) {
        match &self.factor {
            Factor::Cholesky(l) => l.solve_in_place(rhs.as_mut()),
            Factor::Lu(l) => l.solve_in_place(rhs.as_mut()),
        }
    }

    pub fn solve(&self, r: &[f64]) -> Vec<f64> {
        let mut y = Mat::from_fn(self.n, 1, |i, _| r[i]);
        self.solve_mat(&mut y);
        (0..self.n).map(|i| y[(i, 0)]).collect()
    }

    /// Solves for several right-hand sides at once.
    pub fn solve_many(&self, rs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut y = Mat::from_fn(self.n, rs.len(), |i, j| rs[j][i]);
        self.solve_mat(&mut y);
        (0..rs.len()).map(|j| (0..self.n).map(|i| y[(i, j)]).collect()).collect()
    }
}

pub fn factorize(a: &CsrMatrix, b: &CsrMatrix, sigma: f64) -> Result<Factorization> {
    Factorization::new(a, b, sigma)
}

/// `||A x - lambda B x|| / (lambda ||B x||)`
pub fn eig_residual(a: &CsrMatrix, b: &CsrMatrix, value: f64, x: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let bx = b.mul_vec(x);
    let r: Vec<f64> = ax.iter().zip(&bx).map(|(p, q)| p - value * q).collect();
    norm2(&r) / (value.abs() * norm2(&bx))
}

/// Size of the residual that rounding alone produces for `x`:
/// `eps * || |A||x| + lambda |B||x| || / (lambda ||B x||)`.
pub fn residual_floor(a: &CsrMatrix, b: &CsrMatrix, value: f64, x: &[f64]) -> f64 {
    let ax = a.abs_mul_vec(x);
    let bx = b.abs_mul_vec(x);
    let s: Vec<f64> = ax.iter().zip(&bx).map(|(p, q)| p + value.abs() * q).collect();
    f64::EPSILON * norm2(&s) / (value.abs() * norm2(&b.mul_vec(x)))
}

struct Basis {
    q: Vec<Vec<f64>>,
    bq: Vec<Vec<f64>>,
    aq: Vec<Vec<f64>>,
    /// Projected A, grown column by column.
    h: Vec<Vec<f64>>,
}

impl Basis {
    /// B-orthogonalizes `w` against the basis (twice) and, if it survives,
    /// appends it. Returns false for a dependent vector.
    fn push(&mut self, a: &CsrMatrix, b: &CsrMatrix, mut w: Vec<f64>) -> bool {
        let norm0 = b.bilinear(&w, &w).max(0.0).sqrt();
        if norm0 == 0.0 || !norm0.is_finite() {
            return false;
        }
        for _ in 0..2 {
            let coef: Vec<f64> = self.bq.iter().map(|bq| dot(bq, &w)).collect();
            for (q, c) in self.q.iter().zip(coef) {
                w.iter_mut().zip(q).for_each(|(x, q)| *x -= c * q);
            }
        }
        let bw = b.mul_vec(&w);
        let nrm = dot(&w, &bw).max(0.0).sqrt();
        if nrm <= 1e-10 * norm0 {
            return false;
        }
        w.iter_mut().for_each(|x| *x /= nrm);
        let bw: Vec<f64> = bw.iter().map(|x| x / nrm).collect();
        let aw = a.mul_vec(&w);
        let col: Vec<f64> = self.q.iter().map(|q| dot(q, &aw)).chain([dot(&w, &aw)]).collect();
        for (row, &v) in self.h.iter_mut().zip(&col) {
            row.push(v);
        }
        self.h.push(col);
        self.q.push(w);
        self.bq.push(bw);
        self.aq.push(aw);
        true
    }

    fn len(&self) -> usize {
        self.q.len()
    }
}

/// The `cfg.k` eigenpairs with eigenvalues nearest the shift, ascending.
pub fn solve_eigs(a: &CsrMatrix, b: &CsrMatrix, cfg: &SolverConfig) -> Result<Vec<EigenPair>> {
    let f = factorize(a, b, cfg.shift)?;
    solve_eigs_with(a, b, &f, cfg)
}

/// As [`solve_eigs`] with a factorization of `A - cfg.shift B` supplied.
pub fn solve_eigs_with(a: &CsrMatrix, b: &CsrMatrix, f: &Factorization, cfg: &SolverConfig) -> Result<Vec<EigenPair>> {
    let n = a.nrows;
    if cfg.k == 0 || !(cfg.tol > 0.0) {
        return Err(Error::InvalidInput("need k >= 1 and tol > 0".into()));
    }
    if cfg.k > n {
        return Err(Error::InvalidInput(format!("{} eigenpairs requested from dimension {n}", cfg.k)));
    }
    let max_dim = cfg.max_dim.unwrap_or((4 * cfg.k + 60).max(cfg.k + 10)).min(n);
    let min_dim = (cfg.k + 10).min(n);
    let block = cfg.block.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect() };

    let mut basis = Basis { q: Vec::new(), bq: Vec::new(), aq: Vec::new(), h: Vec::new() };
    let mut last: Vec<usize> = Vec::new();
    let mut starts: Vec<Vec<f64>> = (0..block).map(|_| random(&mut rng)).collect();
    let mut residuals = Vec::new();
    loop {
        // apply the shift-invert operator to the newest block
        let rhs: Vec<Vec<f64>> = starts.iter().map(|s| b.mul_vec(s)).collect();
        let ws = f.solve_many(&rhs);
        let mut added = Vec::new();
        for w in ws {
            if basis.len() >= max_dim {
                break;
            }
            let mut w = w;
            let mut tries = 0;
            while !basis.push(a, b, w) {
                // deflated direction: continue with a fresh random vector
                tries += 1;
                if tries > 5 {
                    return Err(Error::NoConvergence { dim: basis.len(), residuals });
                }
                w = f.solve(&b.mul_vec(&random(&mut rng)));
            }
            added.push(basis.len() - 1);
        }
        if !added.is_empty() {
            last = added;
        }
        let m = basis.len();
        if m >= min_dim || m == max_dim {
            let pairs = ritz_pairs(a, b, &basis, cfg)?;
            residuals = pairs.iter().map(|p| p.residual).collect();
            if pairs.iter().all(|p| p.converged(cfg.tol)) {
                return Ok(pairs);
            }
            if m == max_dim {
                return Err(Error::NoConvergence { dim: m, residuals });
            }
        }
        starts = last.iter().map(|&i| basis.q[i].clone()).collect();
    }
}

/// Rounding noise in the projected matrix is common to all Ritz vectors, so
/// a smooth vector cannot get below the absolute residual noise of the
/// roughest one. Lifts each floor to the largest absolute noise in the set.
fn share_floor(b: &CsrMatrix, pairs: &mut [EigenPair]) {
    let scale: Vec<f64> = pairs.iter().map(|p| 1.0 / (p.value.abs() * norm2(&b.mul_vec(&p.vector)))).collect();
    let noise = pairs.iter().zip(&scale).map(|(p, s)| p.floor / s).fold(0.0, f64::max);
    for (p, s) in pairs.iter_mut().zip(scale) {
        p.floor = p.floor.max(noise * s);
    }
}

fn ritz_pairs(a: &CsrMatrix, b: &CsrMatrix, basis: &Basis, cfg: &SolverConfig) -> Result<Vec<EigenPair>> {
    let m = basis.len();
    let n = a.nrows;
    let h = DMatrix::from_fn(m, m, |i, j| 0.5 * (basis.h[i][j] + basis.h[j][i]));
    let eig = SymmetricEigen::new(h);
    let lam = &eig.eigenvalues;
    let mut order: Vec<usize> = (0..m).collect();
    let dist = |i: usize| (lam[i] - cfg.shift).abs();
    order.sort_by(|&i, &j| dist(i).total_cmp(&dist(j)).then(i.cmp(&j)));
    order.truncate(cfg.k);
    order.sort_by(|&i, &j| lam[i].total_cmp(&lam[j]).then(i.cmp(&j)));
    if let Some(&c) = order.iter().find(|&&c| lam[c] <= 0.0) {
        return Err(Error::NonPositiveEigenvalue(lam[c]));
    }
    let mut pairs = Vec::with_capacity(cfg.k);
    for (idx, &c) in order.iter().enumerate() {
        let y = eig.eigenvectors.column(c);
        let mut x = vec![0.0; n];
        let mut ax = vec![0.0; n];
        let mut bx = vec![0.0; n];
        for (j, &yj) in y.iter().enumerate() {
            for i in 0..n {
                x[i] += yj * basis.q[j][i];
                ax[i] += yj * basis.aq[j][i];
                bx[i] += yj * basis.bq[j][i];
            }
        }
        let nb = dot(&x, &bx).sqrt();
        let big = x.iter().fold(0.0f64, |m, &v| if v.abs() > m.abs() { v } else { m });
        let s = if big < 0.0 { -1.0 / nb } else { 1.0 / nb };
        x.iter_mut().for_each(|v| *v *= s);
        let value = lam[c];
        let residual = eig_residual(a, b, value, &x);
        let floor = residual_floor(a, b, value, &x);
        pairs.push(EigenPair { value, vector: x, index: idx + 1, residual, floor });
    }
    if pairs.len() < cfg.k {
        return Err(Error::NoConvergence { dim: m, residuals: pairs.iter().map(|p| p.residual).collect() });
    }
    share_floor(b, &mut pairs);
    Ok(pairs)
}
