//! Sparse semi-echelon form for large homogeneous systems.

use std::collections::BTreeSet;

use crate::field::Scalar;

/// Rows kept with a unit leading entry at a column no other row leads at.
///
/// Rows are reduced only to the left of their pivot, which keeps fill-in low.
#[derive(Clone, Debug)]
pub struct SparseEchelon<S> {
    n: usize,
    rows: Vec<Vec<(usize, S)>>,
    pivot_row: Vec<Option<usize>>,
}

impl<S: Scalar> SparseEchelon<S> {
    pub fn new(n: usize) -> Self {
        SparseEchelon { n, rows: Vec::new(), pivot_row: vec![None; n] }
    }

    pub fn num_cols(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a row given as `(column, value)` pairs; duplicates are summed.
    /// Returns true when the rank grew.
    pub fn insert(&mut self, entries: &[(usize, S)]) -> bool {
        let mut acc: std::collections::BTreeMap<usize, S> = std::collections::BTreeMap::new();
        for &(c, v) in entries {
            if !v.is_zero() {
                let e = acc.entry(c).or_insert(S::zero());
                *e += v;
            }
        }
        let mut todo: BTreeSet<usize> = acc.iter().filter(|(_, v)| !v.is_zero()).map(|(c, _)| *c).collect();
        while let Some(c) = todo.pop_first() {
            let v = acc.get(&c).copied().unwrap_or(S::zero());
            if v.is_zero() {
                continue;
            }
            match self.pivot_row[c] {
                Some(r) => {
                    for &(cc, rv) in &self.rows[r] {
                        let e = acc.entry(cc).or_insert(S::zero());
                        *e -= v * rv;
                        if cc != c && !e.is_zero() {
                            todo.insert(cc);
                        }
                    }
                }
                None => {
                    let inv = v.inv().unwrap();
                    let row: Vec<(usize, S)> =
                        acc.range(c..).filter(|(_, x)| !x.is_zero()).map(|(&cc, &x)| (cc, x * inv)).collect();
                    self.pivot_row[c] = Some(self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
        false
    }

    /// Dense basis of the solution space of the inserted equations.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let mut pivots: Vec<(usize, usize)> =
            self.pivot_row.iter().enumerate().filter_map(|(c, r)| r.map(|r| (c, r))).collect();
        pivots.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let free: Vec<usize> = (0..self.n).filter(|&c| self.pivot_row[c].is_none()).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![S::zero(); self.n];
                x[f] = S::one();
                for &(c, r) in &pivots {
                    let mut s = S::zero();
                    for &(cc, v) in &self.rows[r] {
                        if cc != c {
                            s += v * x[cc];
                        }
                    }
                    x[c] = -s;
                }
                x
            })
            .collect()
    }

    /// Whether a dense vector satisfies every inserted equation.
    pub fn satisfied_by(&self, x: &[S]) -> bool {
        self.rows.iter().all(|r| r.iter().fold(S::zero(), |acc, &(c, v)| acc + v * x[c]).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F5;
    use crate::linalg::Mat;
    use num_traits::Zero;

    fn f(x: i64) -> F5 {
        F5::from_i64(x)
    }

    #[test]
    fn matches_dense_kernel() {
        let rows: Vec<Vec<i64>> = vec![vec![1, 2, 0, 3, 0], vec![0, 1, 4, 0, 1], vec![1, 3, 4, 3, 1], vec![2, 0, 0, 1, 1]];
        let mut se = SparseEchelon::new(5);
        for r in &rows {
            let e: Vec<(usize, F5)> = r.iter().enumerate().map(|(c, &v)| (c, f(v))).collect();
            se.insert(&e);
        }
        let dense = Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&v| f(v)).collect()).collect::<Vec<_>>(), 5);
        assert_eq!(se.rank(), dense.rank());
        let k = se.kernel();
        assert_eq!(k.len(), 5 - dense.rank());
        for v in &k {
            assert!(dense.mul_vec(v).iter().all(|x| x.is_zero()));
            assert!(se.satisfied_by(v));
        }
    }

    #[test]
    fn duplicate_columns_are_summed() {
        let mut se = SparseEchelon::<F5>::new(2);
        assert!(!se.insert(&[(0, f(2)), (0, f(3))]));
        assert!(se.insert(&[(1, f(1)), (0, f(1))]));
        assert_eq!(se.rank(), 1);
    }
}
