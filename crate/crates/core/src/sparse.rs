//! Compressed sparse row matrices and the handful of kernels the solver needs.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            vals: vec![1.0; n],
        }
    }

    /// Sums duplicate entries; columns within a row come out sorted.
    pub fn from_triplets(nrows: usize, ncols: usize, mut trip: Vec<(usize, usize, f64)>) -> Self {
        trip.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(trip.len());
        let mut vals: Vec<f64> = Vec::with_capacity(trip.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in trip {
            debug_assert!(i < nrows && j < ncols);
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { nrows, ncols, row_ptr, col_idx, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.vals[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.matvec(x, &mut y);
        y
    }

    /// `|M| |x|`, entrywise absolute values.
    pub fn abs_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nrows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(&j, &v)| (v * x[j]).abs()).sum()
            })
            .collect()
    }

    /// `x^T M y`
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.nrows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                x[i] * cols.iter().zip(vals).map(|(&j, &v)| v * y[j]).sum::<f64>()
            })
            .sum()
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0; self.nnz()];
        let mut vals = vec![0.0; self.nnz()];
        for i in 0..self.nrows {
            let (cols, v) = self.row(i);
            for (&j, &x) in cols.iter().zip(v) {
                col_idx[next[j]] = i;
                vals[next[j]] = x;
                next[j] += 1;
            }
        }
        CsrMatrix { nrows: self.ncols, ncols: self.nrows, row_ptr, col_idx, vals }
    }

    /// Gustavson product `self * other`; columns sorted within each row.
    pub fn matmul(&self, other: &CsrMatrix) -> Result<CsrMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = vec![0.0; other.ncols];
        let mut seen = vec![usize::MAX; other.ncols];
        let mut row_ptr = Vec::with_capacity(self.nrows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        let mut pattern: Vec<usize> = Vec::new();
        for i in 0..self.nrows {
            pattern.clear();
            let (ac, av) = self.row(i);
            for (&k, &a) in ac.iter().zip(av) {
                let (bc, bv) = other.row(k);
                for (&j, &b) in bc.iter().zip(bv) {
                    if seen[j] != i {
                        seen[j] = i;
                        acc[j] = 0.0;
                        pattern.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            pattern.sort_unstable();
            for &j in &pattern {
                col_idx.push(j);
                vals.push(acc[j]);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(CsrMatrix { nrows: self.nrows, ncols: other.ncols, row_ptr, col_idx, vals })
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest |M_ij - M_ji|.
    pub fn asymmetry(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `(M + M^T) / 2`, assuming a structurally symmetric pattern.
    pub fn symmetrized(&self) -> CsrMatrix {
        let t = self.transpose();
        let mut out = self.clone();
        for i in 0..self.nrows {
            let r = self.row_ptr[i]..self.row_ptr[i + 1];
            for k in r {
                let j = self.col_idx[k];
                out.vals[k] = 0.5 * (self.vals[k] + t.get(i, j));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                d[i][j] = v;
            }
        }
        d
    }

    /// Coordinate text format: header `n nnz`, then `i j value` lines (0-based).
    pub fn to_coordinate_text(&self) -> String {
        let mut s = String::with_capacity(32 * self.nnz());
        writeln!(s, "{} {}", self.nrows, self.nnz()).unwrap();
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                writeln!(s, "{i} {j} {v:?}").unwrap();
            }
        }
        s
    }

    pub fn from_coordinate_text(text: &str) -> Result<CsrMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |l: &str| Error::Parse(format!("bad coordinate line `{l}`"));
        let head = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let h: Vec<usize> = head
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad(head)))
            .collect::<Result<_>>()?;
        if h.len() != 2 {
            return Err(bad(head));
        }
        let (n, nnz) = (h[0], h[1]);
        let mut trip = Vec::with_capacity(nnz);
        for l in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(l));
            }
            let i: usize = f[0].parse().map_err(|_| bad(l))?;
            let j: usize = f[1].parse().map_err(|_| bad(l))?;
            let v: f64 = f[2].parse().map_err(|_| bad(l))?;
            if i >= n || j >= n {
                return Err(bad(l));
            }
            trip.push((i, j, v));
        }
        if trip.len() != nnz {
            return Err(Error::Parse(format!("expected {nnz} entries, found {}", trip.len())));
        }
        Ok(CsrMatrix::from_triplets(n, n, trip))
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CsrMatrix {
        CsrMatrix::from_triplets(3, 3, vec![(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0), (2, 2, 4.0), (2, 2, 1.0)])
    }

    #[test]
    fn triplets_are_summed() {
        let m = sample();
        assert_eq!(m.nnz(), 4);
        assert_eq!(m.get(2, 2), 5.0);
        assert_eq!(m.get(1, 2), 0.0);
        assert_eq!(m.asymmetry(), 0.0);
    }

    #[test]
    fn product_and_transpose() {
        let m = sample();
        let p = CsrMatrix::from_triplets(3, 2, vec![(0, 0, 1.0), (1, 0, 1.0), (2, 1, 2.0)]);
        let r = p.transpose().matmul(&m.matmul(&p).unwrap()).unwrap();
        assert_eq!(r.to_dense(), vec![vec![0.0, 0.0], vec![0.0, 20.0]]);
        assert!(m.matmul(&m.transpose()).is_ok());
        assert!(p.matmul(&p).is_err());
    }

    #[test]
    fn coordinate_text_round_trip() {
        let m = sample();
        let back = CsrMatrix::from_coordinate_text(&m.to_coordinate_text()).unwrap();
        assert_eq!(back, m);
        assert!(CsrMatrix::from_coordinate_text("2 1\n0 5 1.0\n").is_err());
    }
}
