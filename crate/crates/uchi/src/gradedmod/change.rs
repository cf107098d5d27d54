//! Change of base algebra, of acting subalgebra and of grading.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{GradedModule, ModuleBuilder, SubalgebraSpec};
use crate::coeff::BaseAlgebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lattice::Weight;
use crate::linalg::{unit_vec, Mat, Span};

/// An algebra map `phi: A -> A'` compatible with the structure maps.
#[derive(Clone, Debug)]
pub struct BaseChange<S: Scalar> {
    pub source: Arc<BaseAlgebra<S>>,
    pub target: Arc<BaseAlgebra<S>>,
    /// `dim A' x dim A`
    pub map: Mat<S>,
}

impl<S: Scalar> BaseChange<S> {
    /// Checks that `map` is a unital algebra map with `phi . pi = pi'`.
    pub fn new(source: Arc<BaseAlgebra<S>>, target: Arc<BaseAlgebra<S>>, map: Mat<S>) -> Result<Self> {
        let (m, m2) = (source.dim(), target.dim());
        if map.rows() != m2 || map.cols() != m {
            return Err(Error::InvalidInput("base change matrix has the wrong shape".into()));
        }
        if map.mul_vec(&source.one()) != target.one() {
            return Err(Error::InvalidInput("base change is not unital".into()));
        }
        for i in 0..m {
            for j in 0..m {
                let (bi, bj) = (unit_vec(m, i), unit_vec(m, j));
                if map.mul_vec(&source.mul(&bi, &bj)) != target.mul(&map.mul_vec(&bi), &map.mul_vec(&bj)) {
                    return Err(Error::InvalidInput("base change is not multiplicative".into()));
                }
            }
        }
        if source.pi.len() != target.pi.len() || source.pi.iter().zip(&target.pi).any(|(a, b)| map.mul_vec(a) != *b) {
            return Err(Error::InvalidInput("base change does not respect pi".into()));
        }
        Ok(BaseChange { source, target, map })
    }

    pub fn identity(a: Arc<BaseAlgebra<S>>) -> Self {
        let m = a.dim();
        BaseChange { source: a.clone(), target: a, map: Mat::identity(m) }
    }

    /// `A -> A / m`.
    pub fn residue(a: Arc<BaseAlgebra<S>>) -> Self {
        let (f, q) = a.residue_quotient();
        BaseChange { source: a, target: Arc::new(f), map: q }
    }

    /// `F_p -> A`; requires every `pi(h_j)` to be a scalar.
    pub fn from_prime_field(a: Arc<BaseAlgebra<S>>) -> Result<Self> {
        let mut pi = Vec::with_capacity(a.pi.len());
        for v in &a.pi {
            if v.iter().skip(1).any(|x| !x.is_zero()) {
                return Err(Error::InvalidInput("pi does not take values in the prime field".into()));
            }
            pi.push(v[0]);
        }
        let f = Arc::new(BaseAlgebra::prime_field(pi));
        let map = Mat::from_cols(&[a.one()], a.dim());
        Ok(BaseChange { source: f, target: a, map })
    }
}

impl<S: Scalar> GradedModule<S> {
    /// `M (x)_A A'`.
    pub fn base_change(&self, bc: &BaseChange<S>) -> Result<GradedModule<S>> {
        if *self.amb.base != *bc.source {
            return Err(Error::AmbientMismatch("module is not over the source algebra".into()));
        }
        let amb = self.amb.with_base(bc.target.clone())?;
        let (m, m2) = (bc.source.dim(), bc.target.dim());
        let idx = |u: usize, k: usize| u * m2 + k;
        // per grade: relations span and quotient basis
        let mut quot: Vec<(Span<S>, Vec<usize>)> = Vec::with_capacity(self.num_grades());
        for g in 0..self.num_grades() {
            let d = self.dims[g];
            let mut rel = Span::new(d * m2);
            for i in 1..m {
                let phi_i = bc.map.mul_vec(&unit_vec(m, i));
                let bi = self.a(g, i);
                for u in 0..d {
                    for k in 0..m2 {
                        let mut v = vec![S::zero(); d * m2];
                        for w in 0..d {
                            let c = bi.get(w, u);
                            if !c.is_zero() {
                                v[idx(w, k)] += c;
                            }
                        }
                        let prod = bc.target.mul(&phi_i, &unit_vec(m2, k));
                        for (l, &c) in prod.iter().enumerate() {
                            v[idx(u, l)] -= c;
                        }
                        rel.insert(v);
                    }
                }
            }
            let qb = rel.quotient_basis();
            quot.push((rel, qb));
        }
        // induced map of `x (x) y` on quotients from grade g to grade t
        let induced = |g: usize, t: usize, x: &Mat<S>, y: &Mat<S>| -> Mat<S> {
            let (rel_t, qb_t) = &quot[t];
            let (_, qb_g) = &quot[g];
            let dt = self.dims[t];
            let cols: Vec<Vec<S>> = qb_g
                .iter()
                .map(|&c| {
                    let (u, k) = (c / m2, c % m2);
                    let mut v = vec![S::zero(); dt * m2];
                    for w in 0..dt {
                        let xw = x.get(w, u);
                        if xw.is_zero() {
                            continue;
                        }
                        for l in 0..m2 {
                            v[w * m2 + l] += xw * y.get(l, k);
                        }
                    }
                    rel_t.quotient_coords(&v, qb_t)
                })
                .collect();
            Mat::from_cols(&cols, qb_t.len())
        };
        let mut b = ModuleBuilder::new(amb);
        for (g, k) in self.keys.iter().enumerate() {
            b.grade(k, quot[g].1.len());
        }
        for (g, k) in self.keys.iter().enumerate() {
            let id_m = Mat::identity(self.dims[g]);
            for i in 1..m2 {
                // right multiplication by b'_i on A'
                let y = bc.target.basis_mult(i);
                b.amap(k, i, induced(g, g, &id_m, &y));
            }
            for r in self.amb.acting_roots() {
                if let Some((t, x)) = self.e(g, r) {
                    b.emap(k, r, induced(g, t, x, &Mat::identity(m2)));
                }
            }
        }
        Ok(b.build())
    }

    /// Restriction along `phi: A -> A'` of a module over `A'`.
    pub fn restrict_scalars(&self, bc: &BaseChange<S>) -> Result<GradedModule<S>> {
        if *self.amb.base != *bc.target {
            return Err(Error::AmbientMismatch("module is not over the target algebra".into()));
        }
        let amb = self.amb.with_base(bc.source.clone())?;
        let mut b = ModuleBuilder::new(amb);
        for (g, k) in self.keys.iter().enumerate() {
            b.grade(k, self.dims[g]);
            for i in 1..bc.source.dim() {
                let x = bc.map.mul_vec(&unit_vec(bc.source.dim(), i));
                b.amap(k, i, self.a_elem(g, &x));
            }
            for r in self.amb.acting_roots() {
                if let Some((_, x)) = self.e(g, r) {
                    b.emap(k, r, x.clone());
                }
            }
        }
        Ok(b.build())
    }

    /// Forgets the root maps outside a smaller subalgebra.
    pub fn restrict_spec(&self, spec: SubalgebraSpec) -> Result<GradedModule<S>> {
        let amb = &self.amb;
        if !amb.spec.contains(spec, &amb.datum, &amb.levi) {
            return Err(Error::WrongSubalgebra(format!("{} is not contained in {}", spec.name(), amb.spec.name())));
        }
        let new = amb.with_spec(spec);
        let mut b = ModuleBuilder::new(new.clone());
        for (g, k) in self.keys.iter().enumerate() {
            b.grade(k, self.dims[g]);
            for i in 1..amb.base.dim() {
                b.amap(k, i, self.a(g, i).clone());
            }
            for r in new.acting_roots() {
                if let Some((_, x)) = self.e(g, r) {
                    b.emap(k, r, x.clone());
                }
            }
        }
        Ok(b.build())
    }

    /// Lets the extra roots of a larger subalgebra act by zero.
    pub fn inflate_spec(&self, spec: SubalgebraSpec) -> Result<GradedModule<S>> {
        let amb = &self.amb;
        if !spec.contains(amb.spec, &amb.datum, &amb.levi) {
            return Err(Error::WrongSubalgebra(format!("{} does not contain {}", spec.name(), amb.spec.name())));
        }
        let m = self.reambient(amb.with_spec(spec));
        if !m.is_valid() {
            return Err(Error::WrongSubalgebra(format!("zero action of the extra roots of {} is not a module", spec.name())));
        }
        Ok(m)
    }

    /// Splits a module over the Levi subalgebra into its `X / ZI` pieces.
    pub fn grade_decompose(&self) -> Result<Vec<(Weight, GradedModule<S>)>> {
        if self.amb.spec != SubalgebraSpec::Levi {
            return Err(Error::WrongSubalgebra(format!("grade decomposition needs the Levi subalgebra, got {}", self.amb.spec.name())));
        }
        let mut groups: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (g, k) in self.keys.iter().enumerate() {
            groups.entry(self.amb.cosets().zi(k).0).or_default().push(g);
        }
        Ok(groups
            .into_iter()
            .map(|(c, gs)| {
                let mut sub = super::Submodule::zero(self);
                for g in gs {
                    for j in 0..self.dims[g] {
                        sub.spans[g].insert(unit_vec(self.dims[g], j));
                    }
                }
                (c, self.sub_module(&sub).0)
            })
            .collect())
    }
}
