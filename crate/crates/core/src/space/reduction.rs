use std::collections::BTreeMap;

use super::ConstraintSet;
use crate::sparse::CsrMatrix;

const RANK_TOL: f64 = 1e-10;

/// Null-space basis of a constraint set: `x = P y` satisfies every constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionMap {
    /// `n x n_free` prolongation.
    pub p: CsrMatrix,
    pub n: usize,
    pub n_free: usize,
    pub rank: usize,
    /// Full-space index of every reduced coordinate, ascending.
    pub free_dofs: Vec<usize>,
    /// Eliminated dofs, ascending.
    pub pivot_dofs: Vec<usize>,
}

impl ReductionMap {
    pub fn identity(n: usize) -> Self {
        ReductionMap {
            p: CsrMatrix::identity(n),
            n,
            n_free: n,
            rank: 0,
            free_dofs: (0..n).collect(),
            pivot_dofs: Vec::new(),
        }
    }

    pub fn prolong(&self, y: &[f64]) -> Vec<f64> {
        self.p.mul_vec(y)
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Eliminates the constraints by fully pivoted Gauss-Jordan reduction on
/// each connected group of rows, dropping rows that become dependent.
pub fn eliminate(constraints: &ConstraintSet, n: usize) -> ReductionMap {
    if constraints.is_empty() {
        return ReductionMap::identity(n);
    }
    // rows sharing a dof belong to the same group
    let rows = &constraints.rows;
    let mut parent: Vec<usize> = (0..rows.len()).collect();
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (r, row) in rows.iter().enumerate() {
        for &c in &row.cols {
            if let Some(&o) = owner.get(&c) {
                let (a, b) = (find(&mut parent, r), find(&mut parent, o));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            } else {
                owner.insert(c, r);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in 0..rows.len() {
        let g = find(&mut parent, r);
        groups.entry(g).or_default().push(r);
    }

    // pivot dof -> (free dof, coefficient) with x_pivot = sum coef * x_free
    let mut eliminated: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    for members in groups.values() {
        let mut cols: Vec<usize> = members.iter().flat_map(|&r| rows[r].cols.iter().copied()).collect();
        cols.sort_unstable();
        cols.dedup();
        let nc = cols.len();
        let mut a: Vec<Vec<f64>> = members
            .iter()
            .map(|&r| {
                let mut dense = vec![0.0; nc];
                let scale = rows[r].vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (&c, &v) in rows[r].cols.iter().zip(&rows[r].vals) {
                    dense[cols.binary_search(&c).unwrap()] += v / scale;
                }
                dense
            })
            .collect();

        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut active: Vec<usize> = (0..a.len()).collect();
        loop {
            let mut best = (0.0, 0, 0);
            for &i in &active {
                for (j, &v) in a[i].iter().enumerate() {
                    if v.abs() > best.0 {
                        best = (v.abs(), i, j);
                    }
                }
            }
            if best.0 <= RANK_TOL {
                break;
            }
            let (_, pi, pj) = best;
            let pv = a[pi][pj];
            a[pi].iter_mut().for_each(|v| *v /= pv);
            a[pi][pj] = 1.0;
            let prow = a[pi].clone();
            for i in 0..a.len() {
                if i == pi {
                    continue;
                }
                let f = a[i][pj];
                if f != 0.0 {
                    for (x, &p) in a[i].iter_mut().zip(&prow) {
                        *x -= f * p;
                    }
                    a[i][pj] = 0.0;
                }
            }
            active.retain(|&i| i != pi);
            pivots.push((pi, pj));
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, j)| j).collect();
        for &(i, j) in &pivots {
            let deps = (0..nc)
                .filter(|c| !pivot_cols.contains(c) && a[i][*c] != 0.0)
                .map(|c| (cols[c], -a[i][c]))
                .collect();
            eliminated.insert(cols[j], deps);
        }
    }

    let free_dofs: Vec<usize> = (0..n).filter(|d| !eliminated.contains_key(d)).collect();
    let mut reduced_index = vec![usize::MAX; n];
    for (k, &d) in free_dofs.iter().enumerate() {
        reduced_index[d] = k;
    }
    let mut trip = Vec::with_capacity(n);
    for d in 0..n {
        match eliminated.get(&d) {
            None => trip.push((d, reduced_index[d], 1.0)),
            Some(deps) => {
                for &(c, v) in deps {
                    trip.push((d, reduced_index[c], v));
                }
            }
        }
    }
    let n_free = free_dofs.len();
    ReductionMap {
        p: CsrMatrix::from_triplets(n, n_free, trip),
        n,
        n_free,
        rank: eliminated.len(),
        free_dofs,
        pivot_dofs: eliminated.keys().copied().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[(&[usize], &[f64])]) -> ConstraintSet {
        let mut c = ConstraintSet::default();
        for (cols, vals) in rows {
            c.push(cols.to_vec(), vals.to_vec()).unwrap();
        }
        c
    }

    fn check_null(c: &ConstraintSet, r: &ReductionMap) {
        for k in 0..r.n_free {
            let mut y = vec![0.0; r.n_free];
            y[k] = 1.0;
            let x = r.prolong(&y);
            for row in &c.rows {
                assert!(row.apply(&x).abs() <= 1e-10 * row.norm());
            }
        }
    }

    #[test]
    fn empty_is_identity() {
        let r = eliminate(&ConstraintSet::default(), 5);
        assert_eq!(r.p, CsrMatrix::identity(5));
        assert_eq!(r.n_free, 5);
    }

    #[test]
    fn duplicate_rows_counted_once() {
        let c = set(&[(&[0, 2], &[1.0, 2.0]), (&[0, 2], &[1.0, 2.0]), (&[0, 2], &[-2.0, -4.0])]);
        let r = eliminate(&c, 4);
        assert_eq!(r.rank, 1);
        assert_eq!(r.n_free, 3);
        check_null(&c, &r);
    }

    #[test]
    fn coupled_groups() {
        let c = set(&[
            (&[0, 1], &[1.0, 1.0]),
            (&[1, 2], &[1.0, -1.0]),
            (&[0, 2], &[1.0, 1.0]),
            (&[4], &[3.0]),
            (&[3, 5, 6], &[1e-3, 2.0, 0.5]),
        ]);
        let r = eliminate(&c, 7);
        assert_eq!(r.rank, 4);
        assert_eq!(r.n_free, 3);
        check_null(&c, &r);
        // columns independent: P restricted to free dofs is the identity
        for (k, &d) in r.free_dofs.iter().enumerate() {
            assert_eq!(r.p.get(d, k), 1.0);
        }
    }
}
