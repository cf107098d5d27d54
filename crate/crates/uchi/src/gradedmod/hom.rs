//! Hom spaces by propagating generator images through the action.

use std::collections::VecDeque;

use super::{GradedModule, Morphism};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{Mat, Span};
use crate::sparse::SparseEchelon;

/// Homogeneous generators of a module, as `(grade, vector)`.
pub type Generators<S> = Vec<(usize, Vec<S>)>;

/// Linear description of all morphisms `M -> N` in terms of the images of
/// a fixed generating set of `M`.
pub struct GeneratedSystem<S: Scalar> {
    pub gens: Generators<S>,
    offsets: Vec<usize>,
    unknowns: usize,
    /// inserted vectors of each grade of `M`, with their image maps `T`
    vecs: Vec<Vec<Vec<S>>>,
    tmats: Vec<Vec<Mat<S>>>,
    vinv: Vec<Mat<S>>,
    rows_n: Vec<usize>,
    constraints: SparseEchelon<S>,
}

/// A basis of `Hom(M, N)`.
pub struct HomSpace<S: Scalar> {
    pub basis: Vec<Morphism<S>>,
}

impl<S: Scalar> HomSpace<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum c_i basis_i`.
    pub fn combine(&self, coef: &[S], src: &GradedModule<S>, tgt: &GradedModule<S>) -> Morphism<S> {
        let mut f = Morphism::zero(src, tgt);
        for (b, &c) in self.basis.iter().zip(coef) {
            if !c.is_zero() {
                f = f.add(&b.scale(c));
            }
        }
        f
    }
}

impl<S: Scalar> GradedModule<S> {
    /// A homogeneous generating set, preferring vectors outside the image of
    /// the action so that cyclic modules get a single generator.
    pub fn generators(&self) -> Generators<S> {
        let mut images: Vec<Span<S>> = self.dims.iter().map(|&d| Span::new(d)).collect();
        for g in 0..self.num_grades() {
            for r in self.amb.acting_roots() {
                if let Some((t, m)) = self.e(g, r) {
                    for v in m.column_space() {
                        images[t].insert(v);
                    }
                }
            }
            for x in self.amb.base.maximal_ideal() {
                for v in self.a_elem(g, x).column_space() {
                    images[g].insert(v);
                }
            }
        }
        let mut sp = super::ops::Spinner::new(self);
        let mut gens = Vec::new();
        for (g, im) in images.iter().enumerate() {
            for j in im.quotient_basis() {
                let v = crate::linalg::unit_vec(self.dims[g], j);
                if sp.add(g, v.clone()) {
                    gens.push((g, v));
                    sp.close();
                }
            }
        }
        for g in 0..self.num_grades() {
            for j in 0..self.dims[g] {
                let v = crate::linalg::unit_vec(self.dims[g], j);
                if sp.add(g, v.clone()) {
                    gens.push((g, v));
                    sp.close();
                }
            }
        }
        gens
    }
}

impl<S: Scalar> GeneratedSystem<S> {
    /// Propagates generator images of `M` into `N`; errors when `gens` does
    /// not generate `M` or the ambients differ.
    pub fn new(src: &GradedModule<S>, tgt: &GradedModule<S>, gens: Generators<S>) -> Result<Self> {
        src.amb.require_same(&tgt.amb)?;
        let ng = src.num_grades();
        let rows_n: Vec<usize> = src.keys.iter().map(|k| tgt.dim_at_key(k)).collect();
        let mut offsets = Vec::with_capacity(gens.len());
        let mut unknowns = 0;
        for (g, _) in &gens {
            offsets.push(unknowns);
            unknowns += rows_n[*g];
        }
        let mut sys = GeneratedSystem {
            gens: Vec::new(),
            offsets,
            unknowns,
            vecs: vec![Vec::new(); ng],
            tmats: vec![Vec::new(); ng],
            vinv: Vec::new(),
            rows_n,
            constraints: SparseEchelon::new(unknowns),
        };
        let mut spans: Vec<Span<S>> = src.dims.iter().map(|&d| Span::tracking(d)).collect();
        let ops = src.amb.ops();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for (i, (g, v)) in gens.iter().enumerate() {
            let mut t = Mat::zeros(sys.rows_n[*g], unknowns);
            for r in 0..sys.rows_n[*g] {
                t.set(r, sys.offsets[i] + r, S::one());
            }
            sys.place(&mut spans, &mut queue, *g, v.clone(), t);
            while let Some((g, k)) = queue.pop_front() {
                let v = sys.vecs[g][k].clone();
                let tv = sys.tmats[g][k].clone();
                for &op in &ops {
                    let (tkey, sm) = src.op(g, op);
                    let rows = tgt.dim_at_key(&tkey);
                    let tw = match tgt.grade_index(&src.keys[g]).and_then(|tg| tgt.op(tg, op).1) {
                        Some((_, m)) => m.mul(&tv),
                        None => Mat::zeros(rows, unknowns),
                    };
                    match sm {
                        Some((t, m)) => {
                            let w = m.mul_vec(&v);
                            sys.place(&mut spans, &mut queue, t, w, tw);
                        }
                        None => sys.add_constraint(&tw),
                    }
                }
            }
        }
        for (g, sp) in spans.iter().enumerate() {
            if sp.dim() != src.dims[g] {
                return Err(Error::InvalidInput("generators do not generate the module".into()));
            }
            let vm = Mat::from_cols(&sys.vecs[g], src.dims[g]);
            sys.vinv.push(vm.inverse().expect("inserted vectors form a basis"));
        }
        sys.gens = gens;
        Ok(sys)
    }

    fn place(
        &mut self,
        spans: &mut [Span<S>],
        queue: &mut VecDeque<(usize, usize)>,
        g: usize,
        w: Vec<S>,
        tw: Mat<S>,
    ) {
        match spans[g].coords_inserted(&w) {
            Some(c) => {
                let mut diff = tw;
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        diff.axpy(-*ck, &self.tmats[g][k]);
                    }
                }
                self.add_constraint(&diff);
            }
            None => {
                spans[g].insert(w.clone());
                self.vecs[g].push(w);
                self.tmats[g].push(tw);
                queue.push_back((g, self.vecs[g].len() - 1));
            }
        }
    }

    fn add_constraint(&mut self, m: &Mat<S>) {
        for i in 0..m.rows() {
            let row: Vec<(usize, S)> = m.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, *x)).collect();
            if !row.is_empty() {
                self.constraints.insert(&row);
            }
        }
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns
    }

    /// Morphism determined by generator images `u` (concatenated).
    pub fn morphism(&self, u: &[S]) -> Morphism<S> {
        Morphism {
            maps: (0..self.vecs.len())
                .map(|g| {
                    let cols: Vec<Vec<S>> = self.tmats[g].iter().map(|t| t.mul_vec(u)).collect();
                    Mat::from_cols(&cols, self.rows_n[g]).mul(&self.vinv[g])
                })
                .collect(),
        }
    }

    /// Basis of all admissible generator images.
    pub fn solutions(&self) -> Vec<Vec<S>> {
        self.constraints.kernel()
    }

    /// The morphism with the given generator images, if one exists.
    pub fn from_images(&self, images: &[Vec<S>]) -> Option<Morphism<S>> {
        let u: Vec<S> = images.iter().flatten().copied().collect();
        if u.len() != self.unknowns || !self.constraints.satisfied_by(&u) {
            return None;
        }
        Some(self.morphism(&u))
    }

    pub fn hom(&self) -> HomSpace<S> {
        HomSpace { basis: self.solutions().iter().map(|u| self.morphism(u)).collect() }
    }
}

/// Basis of `Hom(M, N)`.
pub fn hom_space<S: Scalar>(src: &GradedModule<S>, tgt: &GradedModule<S>) -> Result<HomSpace<S>> {
    src.amb.require_same(&tgt.amb)?;
    if src.is_zero() || tgt.is_zero() {
        return Ok(HomSpace { basis: Vec::new() });
    }
    Ok(GeneratedSystem::new(src, tgt, src.generators())?.hom())
}

/// `Hom(M, N)` using a known generating set of `M`.
pub fn hom_space_with<S: Scalar>(src: &GradedModule<S>, tgt: &GradedModule<S>, gens: Generators<S>) -> Result<HomSpace<S>> {
    Ok(GeneratedSystem::new(src, tgt, gens)?.hom())
}
