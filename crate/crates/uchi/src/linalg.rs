//! Dense exact linear algebra over a prime field.

use serde::{Deserialize, Serialize};

use crate::field::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn scalar(n: usize, c: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<S>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged column");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x;
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += *a * *b;
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: S) -> Mat<S> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| *a * c).collect() }
    }

    pub fn neg(&self) -> Mat<S> {
        self.scale(-S::one())
    }

    /// `self += c * rhs`
    pub fn axpy(&mut self, c: S, rhs: &Mat<S>) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += c * *b;
        }
    }

    pub fn pow(&self, mut e: u64) -> Mat<S> {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn hstack(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                rhs.get(i, j - self.cols)
            }
        })
    }

    pub fn vstack(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Mat { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<S> {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat<S>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat<S> {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat<S> {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat<S>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(i, free);
            }
            out.push(v);
        }
        out
    }

    /// Basis of `{y : y * self = 0}` as row vectors.
    pub fn left_kernel(&self) -> Vec<Vec<S>> {
        self.transpose().kernel()
    }

    pub fn inverse(&self) -> Option<Mat<S>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Mat::from_cols(&[b.to_vec()], self.rows));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    /// Basis of the column space, as a list of vectors.
    pub fn column_space(&self) -> Vec<Vec<S>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.col(c)).collect()
    }

    /// Basis of the row space in reduced echelon form.
    pub fn row_space(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }
}

fn rref_in_place<S: Scalar>(m: &mut Mat<S>) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.data[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = m.data[r * cols + c].inv().expect("nonzero pivot");
        for j in c..cols {
            m.data[r * cols + j] *= inv;
        }
        let (before, rest) = m.data.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for chunk in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
            let f = chunk[c];
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                chunk[j] -= f * prow[j];
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn zero_vec<S: Scalar>(n: usize) -> Vec<S> {
    vec![S::zero(); n]
}

pub fn unit_vec<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

pub fn is_zero_vec<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// `y += c * x`
pub fn axpy<S: Scalar>(y: &mut [S], c: S, x: &[S]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in y.iter_mut().zip(x) {
        *a += c * *b;
    }
}

/// A subspace of `S^n` kept as an echelon basis.
///
/// Rows are stored in insertion order; each row has a unit pivot at a column
/// where all earlier rows vanish, so sequential reduction is exact. When
/// tracking is enabled every row remembers its expression in the inserted
/// vectors.
#[derive(Clone, Debug)]
pub struct Span<S> {
    n: usize,
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
    track: bool,
    combos: Vec<Vec<S>>,
    inserted: usize,
}

impl<S: Scalar> Span<S> {
    pub fn new(n: usize) -> Self {
        Span { n, rows: Vec::new(), pivots: Vec::new(), track: false, combos: Vec::new(), inserted: 0 }
    }

    /// Span that records how each echelon row was built from the inputs.
    pub fn tracking(n: usize) -> Self {
        Span { track: true, ..Self::new(n) }
    }

    pub fn from_vectors(n: usize, vs: impl IntoIterator<Item = Vec<S>>) -> Self {
        let mut s = Self::new(n);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after reduction, and the coefficients used per row.
    pub fn reduce(&self, v: &[S]) -> (Vec<S>, Vec<S>) {
        let mut r = v.to_vec();
        let mut coef = vec![S::zero(); self.rows.len()];
        for (k, row) in self.rows.iter().enumerate() {
            let c = r[self.pivots[k]];
            if !c.is_zero() {
                coef[k] = c;
                axpy(&mut r, -c, row);
            }
        }
        (r, coef)
    }

    pub fn contains(&self, v: &[S]) -> bool {
        is_zero_vec(&self.reduce(v).0)
    }

    /// Coordinates of `v` in terms of the echelon rows, if `v` lies in the span.
    pub fn coords(&self, v: &[S]) -> Option<Vec<S>> {
        let (r, c) = self.reduce(v);
        is_zero_vec(&r).then_some(c)
    }

    /// Coordinates of `v` in terms of the originally inserted vectors.
    pub fn coords_inserted(&self, v: &[S]) -> Option<Vec<S>> {
        assert!(self.track, "span was not built with tracking");
        let c = self.coords(v)?;
        let mut out = vec![S::zero(); self.inserted];
        for (k, ck) in c.iter().enumerate() {
            axpy(&mut out, *ck, &self.combos[k]);
        }
        Some(out)
    }

    /// Inserts `v`; returns true when the dimension grew.
    pub fn insert(&mut self, v: Vec<S>) -> bool {
        assert_eq!(v.len(), self.n);
        let idx = self.inserted;
        self.inserted += 1;
        let (mut r, coef) = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            if self.track {
                for c in &mut self.combos {
                    c.push(S::zero());
                }
            }
            return false;
        };
        let inv = r[p].inv().unwrap();
        for x in r.iter_mut() {
            *x *= inv;
        }
        if self.track {
            for c in &mut self.combos {
                c.push(S::zero());
            }
            // r_old = v - sum coef_k row_k
            let mut combo = vec![S::zero(); self.inserted];
            combo[idx] = S::one();
            for (k, ck) in coef.iter().enumerate() {
                let row_combo = self.combos[k].clone();
                axpy(&mut combo, -*ck, &row_combo);
            }
            for x in combo.iter_mut() {
                *x *= inv;
            }
            self.combos.push(combo);
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    /// Map from `S^n` onto the quotient by this span, in the basis of
    /// non-pivot unit vectors.
    pub fn quotient_basis(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.n).filter(|&j| !is_pivot[j]).collect()
    }

    pub fn quotient_coords(&self, v: &[S], qbasis: &[usize]) -> Vec<S> {
        let (r, _) = self.reduce(v);
        qbasis.iter().map(|&j| r[j]).collect()
    }

    /// Intersection with another subspace of the same ambient space.
    pub fn intersect(&self, other: &Span<S>) -> Span<S> {
        // x in both iff x = sum a_i u_i = sum b_j w_j
        let a = self.dim();
        let b = other.dim();
        if a == 0 || b == 0 {
            return Span::new(self.n);
        }
        let mut cols: Vec<Vec<S>> = self.rows.clone();
        cols.extend(other.rows.iter().map(|w| w.iter().map(|x| -*x).collect()));
        let m = Mat::from_cols(&cols, self.n);
        let mut out = Span::new(self.n);
        for k in m.kernel() {
            let mut v = vec![S::zero(); self.n];
            for i in 0..a {
                axpy(&mut v, k[i], &self.rows[i]);
            }
            out.insert(v);
        }
        out
    }

    pub fn sum(&self, other: &Span<S>) -> Span<S> {
        let mut s = Span::new(self.n);
        for v in self.rows.iter().chain(other.rows.iter()) {
            s.insert(v.clone());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F3, F5};
    use num_traits::{One, Zero};

    fn f5(rows: &[&[i64]]) -> Mat<F5> {
        let c = rows[0].len();
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| F5::from_i64(x)).collect()).collect::<Vec<_>>(), c)
    }

    #[test]
    fn inverse_roundtrip() {
        let a = f5(&[&[1, 2, 0], &[0, 1, 1], &[3, 0, 1]]);
        let inv = a.inverse().expect("invertible");
        assert_eq!(a.mul(&inv), Mat::identity(3));
    }

    #[test]
    fn singular_has_kernel() {
        let a = f5(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&a.mul_vec(v)));
        }
        assert!(a.submatrix(0, 0, 2, 2).inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = f5(&[&[1, 1], &[1, 4]]);
        let b = vec![F5::from_i64(3), F5::from_i64(1)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let s = f5(&[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[F5::one(), F5::zero()]).is_none());
    }

    #[test]
    fn span_tracking_expresses_inputs() {
        let mut s = Span::<F3>::tracking(3);
        let u = vec![F3::from_i64(1), F3::from_i64(2), F3::from_i64(0)];
        let w = vec![F3::from_i64(0), F3::from_i64(1), F3::from_i64(1)];
        assert!(s.insert(u.clone()));
        assert!(s.insert(w.clone()));
        let mut v = u.clone();
        axpy(&mut v, F3::from_i64(2), &w);
        assert!(!s.insert(v.clone()));
        let c = s.coords_inserted(&v).unwrap();
        assert_eq!(c[0], F3::one());
        assert_eq!(c[1], F3::from_i64(2));
    }

    #[test]
    fn intersection_dimension() {
        let e = |i| unit_vec::<F3>(4, i);
        let a = Span::from_vectors(4, [e(0), e(1), e(2)]);
        let b = Span::from_vectors(4, [e(1), e(2), e(3)]);
        assert_eq!(a.intersect(&b).dim(), 2);
        assert_eq!(a.sum(&b).dim(), 4);
    }

    #[test]
    fn matrix_power_of_nilpotent() {
        let n = f5(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(!n.pow(2).is_zero());
        assert!(n.pow(3).is_zero());
        assert_eq!(n.pow(0), Mat::identity(3));
    }
}
