//! Jacobson radicals of action algebras, module radicals and heads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ops::Submodule;
use super::{GradedModule, Morphism};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{Mat, Span};

/// `Tr(a^{p^i}) / p^i mod p` for a block-diagonal matrix lifted to `[0, p)`.
pub(crate) fn trace_form<S: Scalar>(blocks: &[Mat<S>], i: u32) -> S {
    let p = S::CHAR as i64;
    let pi = p.pow(i);
    let modulus = pi * p;
    let mut tr = 0i64;
    for b in blocks {
        let n = b.rows();
        if n == 0 {
            continue;
        }
        let mut a: Vec<i64> = b.as_slice().iter().map(|x| x.to_u32() as i64).collect();
        for _ in 0..i {
            a = int_pow(&a, n, p as u64, modulus);
        }
        for j in 0..n {
            tr = (tr + a[j * n + j]) % modulus;
        }
    }
    debug_assert_eq!(tr % pi, 0, "trace form not divisible on the current ideal");
    S::from_i64(tr / pi)
}

fn int_mul(a: &[i64], b: &[i64], n: usize, m: i64) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] = (c[i * n + j] + x * b[k * n + j]) % m;
            }
        }
    }
    c
}

fn int_pow(a: &[i64], n: usize, mut e: u64, m: i64) -> Vec<i64> {
    let mut acc: Vec<i64> = (0..n * n).map(|k| if k / n == k % n { 1 } else { 0 }).collect();
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = int_mul(&acc, &base, n, m);
        }
        base = int_mul(&base, &base, n, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn mul_blocks<S: Scalar>(x: &[Mat<S>], y: &[Mat<S>]) -> Vec<Mat<S>> {
    x.iter().zip(y).map(|(a, b)| a.mul(b)).collect()
}

pub(crate) fn combine_blocks<S: Scalar>(basis: &[Vec<Mat<S>>], c: &[S]) -> Vec<Mat<S>> {
    let mut out: Vec<Mat<S>> = basis[0].iter().map(|b| Mat::zeros(b.rows(), b.cols())).collect();
    for (b, &cj) in basis.iter().zip(c) {
        if cj.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            o.axpy(cj, x);
        }
    }
    out
}

/// Radical of the algebra spanned by `basis` inside `M_n(F_p)`, where each
/// element is given by its diagonal blocks. Returns coefficient vectors.
pub(crate) fn algebra_radical<S: Scalar>(basis: &[Vec<Mat<S>>], n: usize) -> Vec<Vec<S>> {
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    let p = S::CHAR as usize;
    let mut l = 0u32;
    while p.pow(l + 1) <= n {
        l += 1;
    }
    let mut cur: Vec<Vec<S>> = (0..k).map(|j| crate::linalg::unit_vec(k, j)).collect();
    for i in 0..=l {
        if cur.is_empty() {
            break;
        }
        let xs: Vec<Vec<Mat<S>>> = cur.iter().map(|c| combine_blocks(basis, c)).collect();
        let mut g = Mat::zeros(k, xs.len());
        for (a, y) in basis.iter().enumerate() {
            for (j, x) in xs.iter().enumerate() {
                g.set(a, j, trace_form(&mul_blocks(x, y), i));
            }
        }
        let ker = g.kernel();
        cur = ker
            .iter()
            .map(|kv| {
                let mut v = vec![S::zero(); k];
                for (j, &c) in kv.iter().enumerate() {
                    crate::linalg::axpy(&mut v, c, &cur[j]);
                }
                v
            })
            .collect();
    }
    cur
}

fn flatten<S: Scalar>(m: &Mat<S>) -> Vec<S> {
    m.as_slice().to_vec()
}

fn unflatten<S: Scalar>(v: &[S], rows: usize, cols: usize) -> Mat<S> {
    Mat::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Peirce block `e_g B e_h` of the action algebra, as a span of flattened
/// `d_g x d_h` matrices.
struct Block<S> {
    span: Span<S>,
}

impl<S: Scalar> GradedModule<S> {
    /// All Peirce blocks of the action algebra generated by the grade
    /// idempotents and the action maps; `blocks[g][h]`.
    fn peirce_blocks(&self) -> Vec<Vec<Block<S>>> {
        let ng = self.num_grades();
        let ops = self.amb.ops();
        let mut out_gens: Vec<Vec<(usize, Mat<S>)>> = vec![Vec::new(); ng];
        for g in 0..ng {
            for &op in &ops {
                if let Some((t, m)) = self.op(g, op).1 {
                    out_gens[g].push((t, m.clone()));
                }
            }
        }
        let mut blocks: Vec<Vec<Block<S>>> = (0..ng)
            .map(|g| (0..ng).map(|h| Block { span: Span::new(self.dims[g] * self.dims[h]) }).collect())
            .collect();
        for h in 0..ng {
            let mut queue = std::collections::VecDeque::new();
            let id = Mat::identity(self.dims[h]);
            blocks[h][h].span.insert(flatten(&id));
            queue.push_back((h, id));
            while let Some((g, x)) = queue.pop_front() {
                for (t, y) in &out_gens[g] {
                    let z = y.mul(&x);
                    if z.is_zero() {
                        continue;
                    }
                    if blocks[*t][h].span.insert(flatten(&z)) {
                        queue.push_back((*t, z));
                    }
                }
            }
        }
        blocks
    }

    /// `rad M = J(B) M` for the action algebra `B`.
    pub fn radical(&self) -> Submodule<S> {
        let ng = self.num_grades();
        if ng == 0 {
            return Submodule::zero(self);
        }
        let blocks = self.peirce_blocks();
        let mats = |g: usize, h: usize| -> Vec<Mat<S>> {
            blocks[g][h].span.basis().iter().map(|v| unflatten(v, self.dims[g], self.dims[h])).collect()
        };
        // radical of each corner
        let corner: Vec<Span<S>> = (0..ng)
            .map(|g| {
                let basis: Vec<Vec<Mat<S>>> = mats(g, g).into_iter().map(|m| vec![m]).collect();
                let rad = algebra_radical(&basis, self.dims[g]);
                Span::from_vectors(
                    self.dims[g] * self.dims[g],
                    rad.iter().map(|c| flatten(&combine_blocks(&basis, c)[0])),
                )
            })
            .collect();
        let mut out = Submodule::zero(self);
        for g in 0..ng {
            for h in 0..ng {
                let xs = mats(g, h);
                if xs.is_empty() {
                    continue;
                }
                let jgh: Vec<Mat<S>> = if g == h {
                    corner[g].basis().iter().map(|v| unflatten(v, self.dims[g], self.dims[g])).collect()
                } else {
                    let ys = mats(h, g);
                    let qb = corner[g].quotient_basis();
                    // x = sum c_i x_i with x y in J_gg for all y
                    let mut rows: Vec<Vec<S>> = Vec::new();
                    for y in &ys {
                        let cols: Vec<Vec<S>> =
                            xs.iter().map(|x| corner[g].quotient_coords(&flatten(&x.mul(y)), &qb)).collect();
                        let m = Mat::from_cols(&cols, qb.len());
                        for r in 0..m.rows() {
                            rows.push(m.row(r).to_vec());
                        }
                    }
                    let ker = if rows.is_empty() {
                        (0..xs.len()).map(|j| crate::linalg::unit_vec(xs.len(), j)).collect()
                    } else {
                        Mat::from_rows(&rows, xs.len()).kernel()
                    };
                    ker.iter()
                        .map(|c| {
                            let mut m = Mat::zeros(self.dims[g], self.dims[h]);
                            for (x, &cj) in xs.iter().zip(c) {
                                m.axpy(cj, x);
                            }
                            m
                        })
                        .collect()
                };
                for m in jgh {
                    for v in m.column_space() {
                        out.spans[g].insert(v);
                    }
                }
            }
        }
        out
    }

    /// `M / rad M` with the projection.
    pub fn head(&self) -> (GradedModule<S>, Morphism<S>) {
        self.quotient(&self.radical())
    }

    /// Radical and head of a cyclic module with a unique maximal submodule.
    pub fn radical_and_head(&self, g: usize, v: &[S]) -> Result<RadicalHead<S>> {
        if !self.amb.base.is_prime_field() {
            return Err(Error::NeedsField);
        }
        if !self.spin(&[(g, v.to_vec())]).is_full() {
            return Err(Error::InvalidInput("vector does not generate the module".into()));
        }
        let radical = self.radical();
        let (head, projection) = self.quotient(&radical);
        if head.is_zero() || !head.head_is_simple(0x5eed)? {
            return Err(Error::NotUniqueMax);
        }
        Ok(RadicalHead { radical, head, projection })
    }

    /// Simplicity test for a semisimple module: trivial endomorphisms, or
    /// every tested homogeneous vector generates.
    fn head_is_simple(&self, seed: u64) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        if super::hom::hom_space(self, self)?.dim() == 1 {
            return Ok(true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in 0..self.num_grades() {
            for j in 0..self.dims[g] {
                if !self.spin(&[(g, crate::linalg::unit_vec(self.dims[g], j))]).is_full() {
                    return Ok(false);
                }
            }
        }
        for _ in 0..32 {
            let g = rng.gen_range(0..self.num_grades());
            let v: Vec<S> = (0..self.dims[g]).map(|_| S::from_i64(rng.gen_range(0..S::CHAR as i64))).collect();
            if crate::linalg::is_zero_vec(&v) {
                continue;
            }
            if !self.spin(&[(g, v)]).is_full() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the module is simple: nonzero, semisimple and indecomposable.
    pub fn is_simple(&self) -> bool {
        !self.is_zero() && self.radical().is_zero() && self.is_indecomposable()
    }
}

/// Output of [`GradedModule::radical_and_head`].
#[derive(Clone, Debug)]
pub struct RadicalHead<S: Scalar> {
    pub radical: Submodule<S>,
    pub head: GradedModule<S>,
    pub projection: Morphism<S>,
}

/// `M > rad M > rad^2 M > ... > 0` as submodules of `M`.
pub fn radical_series<S: Scalar>(m: &GradedModule<S>) -> Vec<Submodule<S>> {
    let mut out = vec![Submodule::full(m)];
    let mut cur = Submodule::full(m);
    loop {
        let (sub, incl) = m.sub_module(&cur);
        let r = sub.radical();
        let next = sub.image_of(&incl, m, &r);
        let done = next.is_zero();
        out.push(next.clone());
        if done {
            break;
        }
        cur = next;
    }
    out
}

impl<S: Scalar> GradedModule<S> {
    /// Composition series refining the radical series: each radical layer
    /// is split into simple summands. Section labels are the first grade key.
    pub fn composition_series(&self, seed: u64) -> Result<super::Filtration<S>> {
        let series = radical_series(self);
        let mut chain = vec![Submodule::zero(self)];
        let mut sections = Vec::new();
        for i in (0..series.len() - 1).rev() {
            let (upper, lower) = (&series[i], &series[i + 1]);
            let (q, proj) = self.quotient(lower);
            let upper_q = self.image_of(&proj, &q, upper);
            let (layer, incl) = q.sub_module(&upper_q);
            let mut acc = Submodule::zero(&q);
            for part in layer.fitting_split(seed)? {
                let img = part.module.image_of(&part.incl, &layer, &Submodule::full(&part.module));
                acc = acc.sum(&layer.image_of(&incl, &q, &img));
                chain.push(self.preimage(&proj, &q, &acc));
                sections.push(part.module);
            }
        }
        let labels = sections.iter().map(|s| s.keys()[0]).collect();
        let witnesses = vec![None; sections.len()];
        Ok(super::Filtration { chain, sections, labels, witnesses })
    }
}
