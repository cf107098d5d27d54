//! Submodules, quotients, kernels, images, sums and filtrations.

use std::collections::VecDeque;

use super::{ModuleBuilder, GradedModule, Morphism, Op};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lattice::Weight;
use crate::linalg::{is_zero_vec, unit_vec, Mat, Span};

/// A graded subspace, one span per grade of the ambient module.
#[derive(Clone, Debug)]
pub struct Submodule<S> {
    pub spans: Vec<Span<S>>,
}

impl<S: Scalar> Submodule<S> {
    pub fn zero(m: &GradedModule<S>) -> Self {
        Submodule { spans: m.dims.iter().map(|&d| Span::new(d)).collect() }
    }

    pub fn full(m: &GradedModule<S>) -> Self {
        Submodule {
            spans: m.dims.iter().map(|&d| Span::from_vectors(d, (0..d).map(|j| unit_vec(d, j)))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.spans.iter().map(|s| s.dim()).sum()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spans.iter().map(|s| s.dim()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.spans.iter().all(|s| s.dim() == s.ambient_dim())
    }

    pub fn contains(&self, g: usize, v: &[S]) -> bool {
        self.spans[g].contains(v)
    }

    pub fn leq(&self, o: &Submodule<S>) -> bool {
        self.spans.iter().zip(&o.spans).all(|(a, b)| a.basis().iter().all(|v| b.contains(v)))
    }

    pub fn sum(&self, o: &Submodule<S>) -> Submodule<S> {
        Submodule { spans: self.spans.iter().zip(&o.spans).map(|(a, b)| a.sum(b)).collect() }
    }

    pub fn intersect(&self, o: &Submodule<S>) -> Submodule<S> {
        Submodule { spans: self.spans.iter().zip(&o.spans).map(|(a, b)| a.intersect(b)).collect() }
    }

    /// Homogeneous basis vectors, grade by grade.
    pub fn vectors(&self) -> Vec<(usize, Vec<S>)> {
        self.spans.iter().enumerate().flat_map(|(g, s)| s.basis().iter().map(move |v| (g, v.clone()))).collect()
    }
}

/// Incremental closure of a set of homogeneous vectors under the action.
pub(crate) struct Spinner<'a, S: Scalar> {
    m: &'a GradedModule<S>,
    ops: Vec<Op>,
    spans: Vec<Span<S>>,
    queue: VecDeque<(usize, Vec<S>)>,
}

impl<'a, S: Scalar> Spinner<'a, S> {
    pub fn new(m: &'a GradedModule<S>) -> Self {
        Spinner { m, ops: m.amb.ops(), spans: m.dims.iter().map(|&d| Span::new(d)).collect(), queue: VecDeque::new() }
    }

    /// Adds `v`; true when it was new. Closure is deferred to [`Spinner::close`].
    pub fn add(&mut self, g: usize, v: Vec<S>) -> bool {
        if self.spans[g].insert(v.clone()) {
            self.queue.push_back((g, v));
            true
        } else {
            false
        }
    }

    pub fn close(&mut self) {
        while let Some((g, v)) = self.queue.pop_front() {
            for &op in &self.ops {
                if let Some((t, w)) = self.m.apply_op(g, op, &v) {
                    if !is_zero_vec(&w) && self.spans[t].insert(w.clone()) {
                        self.queue.push_back((t, w));
                    }
                }
            }
        }
    }

    pub fn finish(mut self) -> Submodule<S> {
        self.close();
        Submodule { spans: self.spans }
    }
}

impl<S: Scalar> GradedModule<S> {
    /// Smallest submodule containing the given homogeneous vectors.
    pub fn spin(&self, vecs: &[(usize, Vec<S>)]) -> Submodule<S> {
        let mut sp = Spinner::new(self);
        for (g, v) in vecs {
            sp.add(*g, v.clone());
        }
        sp.finish()
    }

    /// Splits a vector of the flattened basis into homogeneous parts.
    pub fn homogeneous_parts(&self, v: &[S]) -> Vec<(usize, Vec<S>)> {
        let off = self.offsets();
        (0..self.num_grades())
            .map(|g| (g, v[off[g]..off[g + 1]].to_vec()))
            .filter(|(_, x)| !is_zero_vec(x))
            .collect()
    }

    /// Submodule generated by a vector of the flattened basis.
    pub fn spin_flat(&self, v: &[S]) -> Submodule<S> {
        self.spin(&self.homogeneous_parts(v))
    }

    pub fn is_submodule(&self, sub: &Submodule<S>) -> bool {
        let ops = self.amb.ops();
        sub.vectors().iter().all(|(g, v)| {
            ops.iter().all(|&op| match self.apply_op(*g, op, v) {
                Some((t, w)) => sub.contains(t, &w),
                None => true,
            })
        })
    }

    /// The submodule as a module, with its inclusion.
    pub fn sub_module(&self, sub: &Submodule<S>) -> (GradedModule<S>, Morphism<S>) {
        let mut b = ModuleBuilder::new(self.amb.clone());
        let ops = self.amb.ops();
        for (g, k) in self.keys.iter().enumerate() {
            let basis = sub.spans[g].basis();
            if basis.is_empty() {
                continue;
            }
            b.grade(k, basis.len());
            for &op in &ops {
                let Some((t, m)) = self.op(g, op).1 else { continue };
                let cols: Vec<Vec<S>> = basis
                    .iter()
                    .map(|v| sub.spans[t].coords(&m.mul_vec(v)).expect("submodule is stable"))
                    .collect();
                let mat = Mat::from_cols(&cols, sub.spans[t].dim());
                match op {
                    Op::E(r) => b.emap(k, r, mat),
                    Op::A(i) => b.amap(k, i, mat),
                }
            }
        }
        let s = b.build();
        let incl = Morphism {
            maps: s
                .keys
                .iter()
                .map(|k| {
                    let g = self.grade_index(k).unwrap();
                    Mat::from_cols(sub.spans[g].basis(), self.dims[g])
                })
                .collect(),
        };
        (s, incl)
    }

    /// The quotient module, with its projection.
    pub fn quotient(&self, sub: &Submodule<S>) -> (GradedModule<S>, Morphism<S>) {
        let qb: Vec<Vec<usize>> = sub.spans.iter().map(|s| s.quotient_basis()).collect();
        let mut b = ModuleBuilder::new(self.amb.clone());
        let ops = self.amb.ops();
        for (g, k) in self.keys.iter().enumerate() {
            if qb[g].is_empty() {
                continue;
            }
            b.grade(k, qb[g].len());
            for &op in &ops {
                let Some((t, m)) = self.op(g, op).1 else { continue };
                if qb[t].is_empty() {
                    continue;
                }
                let cols: Vec<Vec<S>> = qb[g].iter().map(|&j| sub.spans[t].quotient_coords(&m.col(j), &qb[t])).collect();
                let mat = Mat::from_cols(&cols, qb[t].len());
                match op {
                    Op::E(r) => b.emap(k, r, mat),
                    Op::A(i) => b.amap(k, i, mat),
                }
            }
        }
        let q = b.build();
        let proj = Morphism {
            maps: self
                .keys
                .iter()
                .enumerate()
                .map(|(g, _)| {
                    let d = self.dims[g];
                    let cols: Vec<Vec<S>> = (0..d).map(|j| sub.spans[g].quotient_coords(&unit_vec(d, j), &qb[g])).collect();
                    Mat::from_cols(&cols, qb[g].len())
                })
                .collect(),
        };
        (q, proj)
    }

    /// `upper / lower` for submodules `lower <= upper`.
    pub fn subquotient(&self, upper: &Submodule<S>, lower: &Submodule<S>) -> GradedModule<S> {
        let (u, _) = self.sub_module(upper);
        let inner = Submodule {
            spans: u
                .keys
                .iter()
                .map(|k| {
                    let g = self.grade_index(k).unwrap();
                    let d = upper.spans[g].dim();
                    Span::from_vectors(d, lower.spans[g].basis().iter().map(|v| upper.spans[g].coords(v).expect("lower <= upper")))
                })
                .collect(),
        };
        u.quotient(&inner).0
    }

    /// Preimage under a projection `self -> q` of a submodule of `q`.
    pub fn preimage(&self, f: &Morphism<S>, q: &GradedModule<S>, sub: &Submodule<S>) -> Submodule<S> {
        Submodule {
            spans: self
                .keys
                .iter()
                .enumerate()
                .map(|(g, k)| {
                    let d = self.dims[g];
                    match q.grade_index(k) {
                        None => Span::from_vectors(d, (0..d).map(|j| unit_vec(d, j))),
                        Some(t) => {
                            // x with f x in sub: kernel of (quotient by sub) . f
                            let qb = sub.spans[t].quotient_basis();
                            let cols: Vec<Vec<S>> =
                                (0..d).map(|j| sub.spans[t].quotient_coords(&f.maps[g].col(j), &qb)).collect();
                            Span::from_vectors(d, Mat::from_cols(&cols, qb.len()).kernel())
                        }
                    }
                })
                .collect(),
        }
    }

    /// Image of a submodule under `f: self -> tgt`.
    pub fn image_of(&self, f: &Morphism<S>, tgt: &GradedModule<S>, sub: &Submodule<S>) -> Submodule<S> {
        let mut out = Submodule::zero(tgt);
        for (g, k) in self.keys.iter().enumerate() {
            if let Some(t) = tgt.grade_index(k) {
                for v in sub.spans[g].basis() {
                    out.spans[t].insert(f.maps[g].mul_vec(v));
                }
            }
        }
        out
    }

    pub fn kernel_sub(&self, f: &Morphism<S>) -> Submodule<S> {
        Submodule { spans: self.dims.iter().zip(&f.maps).map(|(&d, m)| Span::from_vectors(d, m.kernel())).collect() }
    }

    pub fn kernel(&self, f: &Morphism<S>) -> (GradedModule<S>, Morphism<S>) {
        self.sub_module(&self.kernel_sub(f))
    }

    pub fn image(&self, f: &Morphism<S>, tgt: &GradedModule<S>) -> (GradedModule<S>, Morphism<S>) {
        tgt.sub_module(&self.image_of(f, tgt, &Submodule::full(self)))
    }

    pub fn cokernel(&self, f: &Morphism<S>, tgt: &GradedModule<S>) -> (GradedModule<S>, Morphism<S>) {
        tgt.quotient(&self.image_of(f, tgt, &Submodule::full(self)))
    }

    /// `self (+) other` with inclusions and projections.
    pub fn direct_sum(&self, other: &GradedModule<S>) -> Result<DirectSum<S>> {
        self.amb.require_same(&other.amb)?;
        let mut keys: Vec<Weight> = self.keys.iter().chain(other.keys.iter()).copied().collect();
        keys.sort();
        keys.dedup();
        let mut b = ModuleBuilder::new(self.amb.clone());
        let d1 = |k: &Weight| self.dim_at_key(k);
        let d2 = |k: &Weight| other.dim_at_key(k);
        for k in &keys {
            b.grade(k, d1(k) + d2(k));
        }
        let ops = self.amb.ops();
        for k in &keys {
            for &op in &ops {
                let tk = self.amb.op_target(k, op);
                let rows = d1(&tk) + d2(&tk);
                if rows == 0 {
                    continue;
                }
                let mut m = Mat::zeros(rows, d1(k) + d2(k));
                let mut any = false;
                if let Some(g) = self.grade_index(k) {
                    if let Some((_, x)) = self.op(g, op).1 {
                        m.set_block(0, 0, x);
                        any = true;
                    }
                }
                if let Some(g) = other.grade_index(k) {
                    if let Some((_, x)) = other.op(g, op).1 {
                        m.set_block(d1(&tk), d1(k), x);
                        any = true;
                    }
                }
                if any {
                    match op {
                        Op::E(r) => b.emap(k, r, m),
                        Op::A(i) => b.amap(k, i, m),
                    }
                }
            }
        }
        let sum = b.build();
        let inj = |m: &GradedModule<S>, first: bool| Morphism {
            maps: m
                .keys
                .iter()
                .enumerate()
                .map(|(g, k)| {
                    let mut x = Mat::zeros(sum.dim_at_key(k), m.dims[g]);
                    x.set_block(if first { 0 } else { d1(k) }, 0, &Mat::identity(m.dims[g]));
                    x
                })
                .collect(),
        };
        let proj = |m: &GradedModule<S>, first: bool| Morphism {
            maps: sum
                .keys
                .iter()
                .enumerate()
                .map(|(g, k)| {
                    let mut x = Mat::zeros(m.dim_at_key(k), sum.dims[g]);
                    if m.dim_at_key(k) > 0 {
                        x.set_block(0, if first { 0 } else { d1(k) }, &Mat::identity(m.dim_at_key(k)));
                    }
                    x
                })
                .collect(),
        };
        Ok(DirectSum {
            incl: [inj(self, true), inj(other, false)],
            proj: [proj(self, true), proj(other, false)],
            module: sum,
        })
    }

    /// Image of an idempotent endomorphism, with inclusion and projection.
    pub fn summand(&self, e: &Morphism<S>) -> Result<(GradedModule<S>, Morphism<S>, Morphism<S>)> {
        if !e.is_morphism(self, self) || e.then(e, self, self, self) != *e {
            return Err(Error::NotIdempotent);
        }
        let sub = self.image_of(e, self, &Submodule::full(self));
        let (s, incl) = self.sub_module(&sub);
        let proj = Morphism {
            maps: self
                .keys
                .iter()
                .enumerate()
                .map(|(g, k)| {
                    let d = self.dims[g];
                    let rows = s.dim_at_key(k);
                    let cols: Vec<Vec<S>> =
                        (0..d).map(|j| sub.spans[g].coords(&e.maps[g].col(j)).expect("image of e")).collect();
                    Mat::from_cols(&cols, rows)
                })
                .collect(),
        };
        Ok((s, incl, proj))
    }
}

/// A binary direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum<S: Scalar> {
    pub module: GradedModule<S>,
    pub incl: [Morphism<S>; 2],
    pub proj: [Morphism<S>; 2],
}

/// `0 = M_0 < M_1 < ... < M_r = M`, with labelled sections.
#[derive(Clone, Debug)]
pub struct Filtration<S: Scalar> {
    pub chain: Vec<Submodule<S>>,
    /// section `i` is `M_{i+1} / M_i`
    pub sections: Vec<GradedModule<S>>,
    pub labels: Vec<Weight>,
    /// isomorphism from the standard object named by the label onto the section
    pub witnesses: Vec<Option<Morphism<S>>>,
}

impl<S: Scalar> Filtration<S> {
    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    /// Checks the chain is an increasing sequence of submodules of `m`
    /// from zero to `m`, with the recorded sections.
    pub fn verify(&self, m: &GradedModule<S>) -> bool {
        let n = self.chain.len();
        if n == 0 || !self.chain[0].is_zero() || !self.chain[n - 1].is_full() || self.sections.len() + 1 != n {
            return false;
        }
        for i in 0..n {
            if !m.is_submodule(&self.chain[i]) {
                return false;
            }
            if i + 1 < n {
                if !self.chain[i].leq(&self.chain[i + 1]) {
                    return false;
                }
                let sq = m.subquotient(&self.chain[i + 1], &self.chain[i]);
                if sq.dims() != self.sections[i].dims() || sq.keys() != self.sections[i].keys() {
                    return false;
                }
            }
        }
        true
    }
}
