//! Induction along subalgebra inclusions by PBW straightening, inflation,
//! change of grading and Frobenius reciprocity checks.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::gradedmod::{hom_space, Ambient, GradedModule, Grading, ModuleBuilder, Morphism, SubalgebraSpec};
use crate::lattice::Weight;
use crate::linalg::{unit_vec, Mat, Span};

/// PBW exponents over the induced root vectors.
pub type Exps = Vec<u8>;

/// Element of an induced module: `(exponents, grade of M) -> vector in M_g`.
type Elem<S> = BTreeMap<(Exps, usize), Vec<S>>;

fn add_into<S: Scalar>(acc: &mut Elem<S>, c: S, e: &Elem<S>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in e {
        let slot = acc.entry(k.clone()).or_insert_with(|| vec![S::zero(); v.len()]);
        crate::linalg::axpy(slot, c, v);
    }
    acc.retain(|_, v| !crate::linalg::is_zero_vec(v));
}

/// `U(to) (x)_{U(from)} M` with its PBW basis.
#[derive(Clone, Debug)]
pub struct Induced<S: Scalar> {
    pub module: GradedModule<S>,
    /// induced root vectors in PBW order, leftmost first
    pub roots: Vec<usize>,
    /// per grade of the induced module, its blocks `(exponents, grade of M)`
    pub blocks: Vec<Vec<(Exps, usize)>>,
    index: HashMap<(Exps, usize), (usize, usize)>,
}

impl<S: Scalar> Induced<S> {
    /// Grade and offset of the block `X (x) M_g`.
    pub fn locate(&self, exps: &[u8], g: usize) -> Option<(usize, usize)> {
        self.index.get(&(exps.to_vec(), g)).copied()
    }

    /// Coordinates of `X (x) v` for `v in M_g`.
    pub fn vector(&self, exps: &[u8], g: usize, v: &[S]) -> (usize, Vec<S>) {
        let (grade, off) = self.locate(exps, g).expect("PBW block exists");
        let mut out = vec![S::zero(); self.module.dims()[grade]];
        out[off..off + v.len()].copy_from_slice(v);
        (grade, out)
    }

    /// Unit `M -> Ind M`, `m -> 1 (x) m`, as a morphism into the restriction.
    pub fn unit(&self, src: &GradedModule<S>, restricted: &GradedModule<S>) -> Morphism<S> {
        let zero: Exps = vec![0; self.roots.len()];
        Morphism {
            maps: (0..src.num_grades())
                .map(|g| {
                    let d = src.dims()[g];
                    let (grade, off) = self.locate(&zero, g).expect("degree zero block");
                    let rows = restricted.dims()[grade];
                    let mut m = Mat::zeros(rows, d);
                    for j in 0..d {
                        m.set(off + j, j, S::one());
                    }
                    m
                })
                .collect(),
        }
    }
}

struct Straightener<'a, S: Scalar> {
    m: &'a GradedModule<S>,
    amb: Arc<Ambient<S>>,
    roots: Vec<usize>,
    pos: Vec<Option<usize>>,
    p: u8,
    memo: HashMap<(usize, Exps, usize, usize), Elem<S>>,
}

impl<'a, S: Scalar> Straightener<'a, S> {
    fn weight(&self, exps: &[u8], g: usize) -> Weight {
        let mut w = self.m.keys()[g];
        for (i, &a) in exps.iter().enumerate() {
            if a > 0 {
                w += (a as i32) * self.amb.datum.root(self.roots[i]);
            }
        }
        w
    }

    fn single(exps: Exps, g: usize, v: Vec<S>) -> Elem<S> {
        let mut e = Elem::new();
        if !crate::linalg::is_zero_vec(&v) {
            e.insert((exps, g), v);
        }
        e
    }

    fn act(&mut self, root: usize, e: &Elem<S>) -> Elem<S> {
        let mut out = Elem::new();
        for ((exps, g), v) in e {
            for (j, &c) in v.iter().enumerate() {
                if !c.is_zero() {
                    let r = self.act_basis(root, exps, *g, j);
                    add_into(&mut out, c, &r);
                }
            }
        }
        out
    }

    fn act_pow(&mut self, root: usize, k: usize, mut e: Elem<S>) -> Elem<S> {
        for _ in 0..k {
            if e.is_empty() {
                break;
            }
            e = self.act(root, &e);
        }
        e
    }

    /// Right multiplication by the toral element `h_root` evaluated grade-wise.
    fn act_coroot(&self, root: usize, e: &Elem<S>) -> Elem<S> {
        let mut out = Elem::new();
        for ((exps, g), v) in e {
            let x = self.amb.coroot_elem(&self.weight(exps, *g), root);
            let w = self.m.a_elem(*g, &x).mul_vec(v);
            add_into(&mut out, S::one(), &Self::single(exps.clone(), *g, w));
        }
        out
    }

    fn act_basis(&mut self, root: usize, exps: &[u8], g: usize, j: usize) -> Elem<S> {
        let key = (root, exps.to_vec(), g, j);
        if let Some(e) = self.memo.get(&key) {
            return e.clone();
        }
        let e = self.compute(root, exps, g, j);
        self.memo.insert(key, e.clone());
        e
    }

    fn compute(&mut self, root: usize, exps: &[u8], g: usize, j: usize) -> Elem<S> {
        let d = self.m.dims()[g];
        let unit = unit_vec::<S>(d, j);
        let first = exps.iter().position(|&a| a > 0);
        match (self.pos[root], first) {
            (Some(k), f) if f.is_none_or(|i| k < i) => {
                let mut x = exps.to_vec();
                x[k] = 1;
                return Self::single(x, g, unit);
            }
            (Some(k), Some(i)) if k == i => {
                let mut x = exps.to_vec();
                if x[k] + 1 == self.p {
                    x[k] = 0;
                    let c = self.amb.chi(root).pow(self.p as u64);
                    return Self::single(x, g, unit.iter().map(|&u| u * c).collect());
                }
                x[k] += 1;
                return Self::single(x, g, unit);
            }
            (None, None) => {
                return match self.m.e(g, root) {
                    Some((t, mat)) => Self::single(exps.to_vec(), t, mat.col(j)),
                    None => Elem::new(),
                };
            }
            _ => {}
        }
        // move e_root past the leading power c^a
        let i = first.expect("nonempty monomial");
        let c = self.roots[i];
        let a = exps[i] as usize;
        let mut y = exps.to_vec();
        y[i] = 0;
        let inner = self.act_basis(root, &y, g, j);
        let mut res = self.act_pow(c, a, inner);
        let datum = self.amb.datum.clone();
        for jj in 0..a {
            let mut w = y.clone();
            w[i] = (a - 1 - jj) as u8;
            let base = Self::single(w, g, unit.clone());
            let comm = if root == datum.neg(c) {
                self.act_coroot(root, &base)
            } else if let Some(s) = datum.sum_root(root, c) {
                let n = S::from_i64(datum.n_const(root, c) as i64);
                let mut e = self.act(s, &base);
                e.values_mut().for_each(|v| v.iter_mut().for_each(|x| *x *= n));
                e
            } else {
                continue;
            };
            let term = self.act_pow(c, jj, comm);
            add_into(&mut res, S::one(), &term);
        }
        res
    }
}

/// The induced root vectors `roots(to) \ roots(from)` in PBW order:
/// increasing absolute height, then index.
pub fn pbw_roots<S: Scalar>(amb: &Ambient<S>, from: SubalgebraSpec, to: SubalgebraSpec) -> Vec<usize> {
    let (d, l) = (&amb.datum, &amb.levi);
    let mut r: Vec<usize> = (0..d.num_roots()).filter(|&x| to.acts(d, l, x) && !from.acts(d, l, x)).collect();
    r.sort_by_key(|&x| (d.height(x).abs(), x));
    r
}

fn all_exps(s: usize, p: u8) -> Vec<Exps> {
    let mut out = vec![Vec::new()];
    for _ in 0..s {
        out = out.into_iter().flat_map(|e| (0..p).map(move |a| [e.clone(), vec![a]].concat())).collect();
    }
    out
}

/// `U(to) (x)_{U(from)} M` for the subalgebra `from` of `M`.
pub fn induce<S: Scalar>(m: &GradedModule<S>, to: SubalgebraSpec) -> Result<Induced<S>> {
    let src = m.ambient();
    let from = src.spec;
    if !to.contains(from, &src.datum, &src.levi) {
        return Err(Error::UnsupportedPair(from.name().into(), to.name().into()));
    }
    let amb = src.with_spec(to);
    let roots = pbw_roots(src, from, to);
    let mut pos = vec![None; src.datum.num_roots()];
    for (i, &r) in roots.iter().enumerate() {
        pos[r] = Some(i);
    }
    let p = src.datum.p as u8;
    let mut st = Straightener { m, amb: amb.clone(), roots: roots.clone(), pos, p, memo: HashMap::new() };
    // grades of the induced module
    let mut by_key: BTreeMap<Weight, Vec<(Exps, usize)>> = BTreeMap::new();
    for exps in all_exps(roots.len(), p) {
        for g in 0..m.num_grades() {
            by_key.entry(amb.key(&st.weight(&exps, g))).or_default().push((exps.clone(), g));
        }
    }
    let keys: Vec<Weight> = by_key.keys().copied().collect();
    let blocks: Vec<Vec<(Exps, usize)>> = by_key.into_values().collect();
    let mut index = HashMap::new();
    let mut dims = Vec::with_capacity(keys.len());
    for (gi, bl) in blocks.iter().enumerate() {
        let mut off = 0;
        for (e, g) in bl {
            index.insert((e.clone(), *g), (gi, off));
            off += m.dims()[*g];
        }
        dims.push(off);
    }
    let mut b = ModuleBuilder::new(amb.clone());
    for (k, &d) in keys.iter().zip(&dims) {
        b.grade(k, d);
    }
    let dim_a = amb.base.dim();
    for (gi, bl) in blocks.iter().enumerate() {
        let d = dims[gi];
        for i in 1..dim_a {
            let mut x = Mat::zeros(d, d);
            for (e, g) in bl {
                let off = index[&(e.clone(), *g)].1;
                x.set_block(off, off, m.a(*g, i));
            }
            b.amap(&keys[gi], i, x);
        }
        for r in amb.acting_roots() {
            let tk = amb.shift(&keys[gi], r);
            let Some(t) = keys.binary_search(&tk).ok() else { continue };
            let mut x = Mat::zeros(dims[t], d);
            for (e, g) in bl {
                let off = index[&(e.clone(), *g)].1;
                for j in 0..m.dims()[*g] {
                    for ((e2, g2), v) in st.act_basis(r, e, *g, j) {
                        let (t2, off2) = index[&(e2, g2)];
                        debug_assert_eq!(t2, t);
                        for (l, &c) in v.iter().enumerate() {
                            if !c.is_zero() {
                                x.add_at(off2 + l, off + j, c);
                            }
                        }
                    }
                }
            }
            b.emap(&keys[gi], r, x);
        }
    }
    Ok(Induced { module: b.build(), roots, blocks, index })
}

/// `A^lambda`: rank one over `A` in the single grade of `lambda`, over `U^0`.
pub fn lambda_object<S: Scalar>(amb: &Ambient<S>, lambda: &Weight) -> GradedModule<S> {
    let amb = amb.with_spec(SubalgebraSpec::Torus);
    let mut b = ModuleBuilder::new(amb.clone());
    let k = b.grade(lambda, amb.base.dim());
    for i in 1..amb.base.dim() {
        b.amap(&k, i, amb.base.basis_mult(i));
    }
    b.build()
}

/// Lets the root vectors of `to` outside the current subalgebra act by zero.
pub fn inflate<S: Scalar>(m: &GradedModule<S>, to: SubalgebraSpec) -> Result<GradedModule<S>> {
    m.inflate_spec(to)
}

/// `Phi'_A`: `U^0 -> U^0 U^+`.
pub fn phi_prime<S: Scalar>(m: &GradedModule<S>) -> Result<Induced<S>> {
    induce(m, SubalgebraSpec::Borel)
}

/// `Z_{A,chi}`: `U^0 U^+ -> U_chi`.
pub fn z_functor<S: Scalar>(m: &GradedModule<S>) -> Result<Induced<S>> {
    induce(m, SubalgebraSpec::Full)
}

/// `Phi_A`: `U^0 -> U_chi`.
pub fn phi<S: Scalar>(m: &GradedModule<S>) -> Result<Induced<S>> {
    induce(m, SubalgebraSpec::Full)
}

/// `Gamma_{A,chi}`: `U^I U_I^+ -> U_chi`.
pub fn gamma<S: Scalar>(m: &GradedModule<S>) -> Result<Induced<S>> {
    expect_spec(m, SubalgebraSpec::LeviPlus)?;
    induce(m, SubalgebraSpec::Full)
}

/// `Gamma'_{A,chi}`: `U_I^- U^I -> U_chi`.
pub fn gamma_prime<S: Scalar>(m: &GradedModule<S>) -> Result<Induced<S>> {
    expect_spec(m, SubalgebraSpec::LeviMinus)?;
    induce(m, SubalgebraSpec::Full)
}

/// `Phi^{I,+}_A`: `U^I -> U^I U_I^+`.
pub fn phi_i_plus<S: Scalar>(m: &GradedModule<S>) -> Result<Induced<S>> {
    expect_spec(m, SubalgebraSpec::Levi)?;
    induce(m, SubalgebraSpec::LeviPlus)
}

/// `Phi^{I,-}_A`: `U^I -> U_I^- U^I`.
pub fn phi_i_minus<S: Scalar>(m: &GradedModule<S>) -> Result<Induced<S>> {
    expect_spec(m, SubalgebraSpec::Levi)?;
    induce(m, SubalgebraSpec::LeviMinus)
}

/// `Phi^I_A`: `U^I -> U_chi`.
pub fn phi_i<S: Scalar>(m: &GradedModule<S>) -> Result<Induced<S>> {
    expect_spec(m, SubalgebraSpec::Levi)?;
    induce(m, SubalgebraSpec::Full)
}

fn expect_spec<S: Scalar>(m: &GradedModule<S>, spec: SubalgebraSpec) -> Result<()> {
    if m.ambient().spec != spec {
        return Err(Error::WrongSubalgebra(format!("expected {}, got {}", spec.name(), m.ambient().spec.name())));
    }
    Ok(())
}

/// `Z_{A,chi}(lambda)` with the generator `v_lambda = 1 (x) 1`.
pub fn baby_verma<S: Scalar>(amb: &Ambient<S>, lambda: &Weight) -> Induced<S> {
    let a = inflate(&lambda_object(amb, lambda), SubalgebraSpec::Borel).expect("chi vanishes on the Borel");
    z_functor(&a).expect("Borel is contained in the full algebra")
}

/// `Z_{A,I,chi}(lambda)` over `U^I`.
pub fn levi_baby_verma<S: Scalar>(amb: &Ambient<S>, lambda: &Weight) -> Induced<S> {
    let a = inflate(&lambda_object(amb, lambda), SubalgebraSpec::LeviBorel).expect("chi vanishes on the Borel");
    induce(&a, SubalgebraSpec::Levi).expect("Levi Borel is contained in the Levi")
}

/// Generator `1 (x) b_0` of an induced rank-one object.
pub fn generator<S: Scalar>(ind: &Induced<S>) -> (usize, Vec<S>) {
    let zero = vec![0; ind.roots.len()];
    let (g, off) = ind.locate(&zero, 0).expect("degree zero block");
    (g, unit_vec(ind.module.dims()[g], off))
}

/// Dimensions on both sides of the Frobenius reciprocity for induction
/// from the subalgebra of `m`, and whether the canonical map is injective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCheck {
    pub induced_side: usize,
    pub restricted_side: usize,
    pub canonical_injective: bool,
}

impl FrobeniusCheck {
    pub fn holds(&self) -> bool {
        self.induced_side == self.restricted_side && self.canonical_injective
    }
}

/// `Hom_to(Ind M, N)` against `Hom_from(M, Res N)` via `f -> f . unit`.
pub fn frobenius_check<S: Scalar>(m: &GradedModule<S>, to: SubalgebraSpec, n: &GradedModule<S>) -> Result<FrobeniusCheck> {
    let ind = induce(m, to)?;
    let lhs = hom_space(&ind.module, n)?;
    let res_n = n.restrict_spec(m.ambient().spec)?;
    let rhs = hom_space(m, &res_n)?;
    let res_ind = ind.module.restrict_spec(m.ambient().spec)?;
    let unit = ind.unit(m, &res_ind);
    let total: usize = m.keys().iter().zip(m.dims()).map(|(k, d)| d * n.dim_at_key(k)).sum();
    let mut span = Span::new(total);
    let mut injective = true;
    for f in &lhs.basis {
        let fr = Morphism { maps: f.maps.clone() };
        let comp = unit.then(&fr, m, &res_ind, &res_n);
        let flat: Vec<S> = comp.maps.iter().flat_map(|x| x.as_slice().to_vec()).collect();
        if !comp.is_morphism(m, &res_n) || !span.insert(flat) {
            injective = false;
        }
    }
    Ok(FrobeniusCheck { induced_side: lhs.dim(), restricted_side: rhs.dim(), canonical_injective: injective })
}

/// Basis of the `n^+`-invariants of each grade, as `(grade, vector)`.
pub fn highest_vectors<S: Scalar>(m: &GradedModule<S>) -> Vec<(usize, Vec<S>)> {
    let amb = m.ambient();
    let pos: Vec<usize> = amb.acting_roots().into_iter().filter(|&r| amb.datum.is_positive(r)).collect();
    let mut out = Vec::new();
    for g in 0..m.num_grades() {
        let d = m.dims()[g];
        let mut stack = Mat::zeros(0, d);
        for &r in &pos {
            if let Some((_, x)) = m.e(g, r) {
                stack = stack.vstack(x);
            }
        }
        let ker = if stack.rows() == 0 { (0..d).map(|j| unit_vec(d, j)).collect() } else { stack.kernel() };
        out.extend(ker.into_iter().map(|v| (g, v)));
    }
    out
}

/// `Upsilon`: collapses an `X`-graded module to the `X / pZI` grading.
pub fn upsilon<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    let amb = m.ambient();
    if amb.grading != Grading::X {
        return Err(Error::InvalidInput("upsilon needs an X-graded module".into()));
    }
    let new = amb.with_grading(Grading::PZI);
    let mut groups: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for (g, k) in m.keys().iter().enumerate() {
        groups.entry(new.key(k)).or_default().push(g);
    }
    let mut offset = vec![0; m.num_grades()];
    let mut dims = BTreeMap::new();
    for (k, gs) in &groups {
        let mut off = 0;
        for &g in gs {
            offset[g] = off;
            off += m.dims()[g];
        }
        dims.insert(*k, off);
    }
    let mut b = ModuleBuilder::new(new.clone());
    for (k, &d) in &dims {
        b.grade(k, d);
    }
    for (k, gs) in &groups {
        let d = dims[k];
        for i in 1..amb.base.dim() {
            let mut x = Mat::zeros(d, d);
            for &g in gs {
                x.set_block(offset[g], offset[g], m.a(g, i));
            }
            b.amap(k, i, x);
        }
        for r in amb.acting_roots() {
            let tk = new.shift(k, r);
            let Some(&td) = dims.get(&tk) else { continue };
            let mut x = Mat::zeros(td, d);
            for &g in gs {
                if let Some((t, y)) = m.e(g, r) {
                    x.set_block(offset[t], offset[g], y);
                }
            }
            b.emap(k, r, x);
        }
    }
    Ok(b.build())
}

/// Lifts a `U^0`-module to the `X` grading, placing each grade at its
/// canonical representative, so that `upsilon . lift_grading = id`.
pub fn lift_grading<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    let amb = m.ambient();
    if amb.spec != SubalgebraSpec::Torus || amb.grading != Grading::PZI {
        return Err(Error::WrongSubalgebra("grading lifts are defined for X/pZI-graded U^0-modules".into()));
    }
    let mut b = ModuleBuilder::new(amb.with_grading(Grading::X));
    for (g, k) in m.keys().iter().enumerate() {
        b.grade(k, m.dims()[g]);
        for i in 1..amb.base.dim() {
            b.amap(k, i, m.a(g, i).clone());
        }
    }
    Ok(b.build())
}
