//! `Ext^1` by cocycles of the action on `N (+) M`.

use std::collections::BTreeMap;

use super::{GradedModule, ModuleBuilder, Morphism, Op};
use crate::error::Result;
use crate::field::Scalar;
use crate::lattice::Weight;
use crate::linalg::{Mat, Span};
use crate::sparse::SparseEchelon;

/// Unknown block `delta(op)` on grade `g` of `M`.
#[derive(Clone, Copy, Debug)]
struct Block {
    offset: usize,
    rows: usize,
    cols: usize,
}

/// Extensions `0 -> N -> E -> M -> 0`, described by the off-diagonal part
/// `delta` of the action on `E = N (+) M`.
#[derive(Clone, Debug)]
pub struct Ext1<S: Scalar> {
    pub dim: usize,
    /// cocycles whose classes form a basis of `Ext^1(M, N)`
    pub classes: Vec<Vec<S>>,
    blocks: BTreeMap<(usize, Op), Block>,
    src: GradedModule<S>,
    tgt: GradedModule<S>,
}

/// Accumulates one matrix equation `sum_k L_k delta(b_k) R_k = 0`.
struct Equation<'a, S: Scalar> {
    rows: usize,
    cols: usize,
    terms: Vec<(Mat<S>, Block, Mat<S>)>,
    blocks: &'a BTreeMap<(usize, Op), Block>,
}

impl<'a, S: Scalar> Equation<'a, S> {
    fn new(blocks: &'a BTreeMap<(usize, Op), Block>, rows: usize, cols: usize) -> Self {
        Equation { rows, cols, terms: Vec::new(), blocks }
    }

    /// Adds `c * L delta(g, op) R`; `None` stands for the identity.
    fn term(&mut self, c: S, l: Option<&Mat<S>>, g: usize, op: Op, r: Option<&Mat<S>>) {
        let Some(&b) = self.blocks.get(&(g, op)) else { return };
        let l = l.cloned().unwrap_or_else(|| Mat::identity(b.rows)).scale(c);
        let r = r.cloned().unwrap_or_else(|| Mat::identity(b.cols));
        debug_assert_eq!((l.rows(), r.cols()), (self.rows, self.cols));
        self.terms.push((l, b, r));
    }

    /// Like [`Self::term`] with an optional left factor that is zero when absent.
    fn nterm(&mut self, c: S, l: Option<Mat<S>>, g: usize, op: Op, r: Option<&Mat<S>>) {
        if let Some(l) = l {
            self.term(c, Some(&l), g, op, r);
        }
    }

    fn emit(self, sys: &mut SparseEchelon<S>) {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let mut row = Vec::new();
                for (l, b, r) in &self.terms {
                    for a in 0..b.rows {
                        let la = l.get(i, a);
                        if la.is_zero() {
                            continue;
                        }
                        for c in 0..b.cols {
                            let rc = r.get(c, j);
                            if !rc.is_zero() {
                                row.push((b.offset + a * b.cols + c, la * rc));
                            }
                        }
                    }
                }
                if !row.is_empty() {
                    sys.insert(&row);
                }
            }
        }
    }
}

fn layout<S: Scalar>(m: &GradedModule<S>, n: &GradedModule<S>) -> (BTreeMap<(usize, Op), Block>, usize) {
    let mut blocks = BTreeMap::new();
    let mut off = 0;
    for g in 0..m.num_grades() {
        for op in m.amb.ops() {
            let rows = n.dim_at_key(&m.amb.op_target(&m.keys[g], op));
            let cols = m.dims[g];
            if rows > 0 && cols > 0 {
                blocks.insert((g, op), Block { offset: off, rows, cols });
                off += rows * cols;
            }
        }
    }
    (blocks, off)
}

/// Matrix of `op` on `N` from the grade with key `key`.
fn n_op<S: Scalar>(n: &GradedModule<S>, key: &Weight, op: Op) -> Option<Mat<S>> {
    let h = n.grade_index(key)?;
    n.op(h, op).1.map(|(_, m)| m.clone())
}

/// Matrix of `op` on `M` from grade `g`, with its target grade.
fn m_op<S: Scalar>(m: &GradedModule<S>, g: usize, op: Op) -> Option<(usize, Mat<S>)> {
    m.op(g, op).1.map(|(t, x)| (t, x.clone()))
}

fn cocycle_system<S: Scalar>(m: &GradedModule<S>, n: &GradedModule<S>, blocks: &BTreeMap<(usize, Op), Block>, k: usize) -> SparseEchelon<S> {
    let amb = &m.amb;
    let base = &amb.base;
    let dim_a = base.dim();
    let p = amb.datum.p as usize;
    let acting = amb.acting_roots();
    let mut sys = SparseEchelon::new(k);
    for g in 0..m.num_grades() {
        let key = m.keys[g];
        let cols = m.dims[g];
        let rows_here = n.dim_at_key(&key);
        // A multiplicativity
        if rows_here > 0 {
            for i in 1..dim_a {
                for j in i..dim_a {
                    let mut eq = Equation::new(blocks, rows_here, cols);
                    eq.nterm(S::one(), n_op(n, &key, Op::A(j)), g, Op::A(i), None);
                    eq.term(S::one(), None, g, Op::A(j), Some(m.a(g, i)));
                    let c = super::base_product(base, i, j);
                    for (l, &cl) in c.iter().enumerate().skip(1) {
                        if !cl.is_zero() {
                            eq.term(-cl, None, g, Op::A(l), None);
                        }
                    }
                    eq.emit(&mut sys);
                }
            }
        }
        for &r in &acting {
            let tkey = amb.shift(&key, r);
            let rows = n.dim_at_key(&tkey);
            let me = m_op(m, g, Op::E(r));
            // e commutes with A
            if rows > 0 {
                for i in 1..dim_a {
                    let mut eq = Equation::new(blocks, rows, cols);
                    eq.nterm(S::one(), n_op(n, &key, Op::E(r)), g, Op::A(i), None);
                    eq.term(S::one(), None, g, Op::E(r), Some(m.a(g, i)));
                    eq.nterm(-S::one(), n_op(n, &tkey, Op::A(i)), g, Op::E(r), None);
                    if let Some((t, x)) = &me {
                        eq.term(-S::one(), None, *t, Op::A(i), Some(x));
                    }
                    eq.emit(&mut sys);
                }
            }
            // e^p = chi^p
            let mut key_k = key;
            let mut path: Vec<(Weight, Option<(usize, Mat<S>)>)> = Vec::with_capacity(p);
            let mut cur: Option<(usize, Mat<S>)> = Some((g, Mat::identity(cols)));
            for _ in 0..p {
                path.push((key_k, cur.clone()));
                key_k = amb.shift(&key_k, r);
                cur = cur.and_then(|(h, x)| m.e(h, r).map(|(t, e)| (t, e.mul(&x))));
            }
            let end_rows = n.dim_at_key(&key_k);
            if end_rows > 0 {
                let mut eq = Equation::new(blocks, end_rows, cols);
                for (k_m, (kk, pm)) in path.iter().enumerate() {
                    let Some((h, x)) = pm else { continue };
                    // N part: e^{p-1-k_m} from shift(kk, r)
                    let mut nk = amb.shift(kk, r);
                    let mut nm: Option<Mat<S>> = Some(Mat::identity(n.dim_at_key(&nk)));
                    for _ in 0..p - 1 - k_m {
                        nm = nm.and_then(|y| n_op(n, &nk, Op::E(r)).map(|e| e.mul(&y)));
                        nk = amb.shift(&nk, r);
                    }
                    if let Some(y) = nm {
                        eq.term(S::one(), Some(&y), *h, Op::E(r), Some(x));
                    }
                }
                eq.emit(&mut sys);
            }
        }
        // brackets
        for (ia, &a) in acting.iter().enumerate() {
            for &b in &acting[ia + 1..] {
                let tkey = amb.shift(&amb.shift(&key, a), b);
                let rows = n.dim_at_key(&tkey);
                if rows == 0 {
                    continue;
                }
                let mut eq = Equation::new(blocks, rows, cols);
                let ka = amb.shift(&key, a);
                let kb = amb.shift(&key, b);
                // e_b e_a
                eq.nterm(S::one(), n_op(n, &ka, Op::E(b)), g, Op::E(a), None);
                if let Some((t, x)) = m_op(m, g, Op::E(a)) {
                    eq.term(S::one(), None, t, Op::E(b), Some(&x));
                }
                // - e_a e_b
                eq.nterm(-S::one(), n_op(n, &kb, Op::E(a)), g, Op::E(b), None);
                if let Some((t, x)) = m_op(m, g, Op::E(b)) {
                    eq.term(-S::one(), None, t, Op::E(a), Some(&x));
                }
                if b == amb.datum.neg(a) {
                    let c = amb.coroot_elem(&key, a);
                    for (l, &cl) in c.iter().enumerate().skip(1) {
                        if !cl.is_zero() {
                            eq.term(-cl, None, g, Op::A(l), None);
                        }
                    }
                } else if let Some(s) = amb.datum.sum_root(a, b) {
                    let c = S::from_i64(amb.datum.n_const(a, b) as i64);
                    eq.term(-c, None, g, Op::E(s), None);
                }
                eq.emit(&mut sys);
            }
        }
    }
    sys
}

/// `delta_f(op) = rho_N(op) f - f rho_M(op)` as a vector of unknowns.
fn coboundary<S: Scalar>(
    m: &GradedModule<S>,
    n: &GradedModule<S>,
    blocks: &BTreeMap<(usize, Op), Block>,
    k: usize,
    f: &[Mat<S>],
) -> Vec<S> {
    let mut v = vec![S::zero(); k];
    for (&(g, op), b) in blocks {
        let key = m.keys[g];
        let mut d = Mat::zeros(b.rows, b.cols);
        if let Some(x) = n_op(n, &key, op) {
            d = d.add(&x.mul(&f[g]));
        }
        if let Some((t, x)) = m_op(m, g, op) {
            d = d.sub(&f[t].mul(&x));
        }
        v[b.offset..b.offset + b.rows * b.cols].copy_from_slice(d.as_slice());
    }
    v
}

impl<S: Scalar> GradedModule<S> {
    /// `Ext^1(self, n)` with representative cocycles.
    pub fn ext1(&self, n: &GradedModule<S>) -> Result<Ext1<S>> {
        self.amb.require_same(&n.amb)?;
        let (blocks, k) = layout(self, n);
        let sys = cocycle_system(self, n, &blocks, k);
        let cocycles = sys.kernel();
        let mut bnd = Span::new(k);
        let shapes: Vec<(usize, usize)> = self.keys.iter().zip(&self.dims).map(|(key, &d)| (n.dim_at_key(key), d)).collect();
        for (g, &(r, c)) in shapes.iter().enumerate() {
            for i in 0..r {
                for j in 0..c {
                    let mut f: Vec<Mat<S>> = shapes.iter().map(|&(r, c)| Mat::zeros(r, c)).collect();
                    f[g].set(i, j, S::one());
                    bnd.insert(coboundary(self, n, &blocks, k, &f));
                }
            }
        }
        let mut classes = Vec::new();
        let mut acc = bnd.clone();
        for z in cocycles {
            if acc.insert(z.clone()) {
                classes.push(z);
            }
        }
        Ok(Ext1 { dim: classes.len(), classes, blocks, src: self.clone(), tgt: n.clone() })
    }
}

impl<S: Scalar> Ext1<S> {
    /// Middle term of the extension given by a cocycle, with the maps
    /// `N -> E` and `E -> M`.
    pub fn extension(&self, delta: &[S]) -> (GradedModule<S>, Morphism<S>, Morphism<S>) {
        let (m, n) = (&self.src, &self.tgt);
        let amb = m.amb.clone();
        let mut keys: Vec<Weight> = m.keys.iter().chain(&n.keys).copied().collect();
        keys.sort();
        keys.dedup();
        let mut b = ModuleBuilder::new(amb.clone());
        let dims: Vec<(usize, usize)> = keys.iter().map(|k| (n.dim_at_key(k), m.dim_at_key(k))).collect();
        for (k, &(dn, dm)) in keys.iter().zip(&dims) {
            b.grade(k, dn + dm);
        }
        let block = |g: Option<usize>, op: Op| -> Option<Mat<S>> {
            let g = g?;
            let bl = self.blocks.get(&(g, op))?;
            Some(Mat::from_fn(bl.rows, bl.cols, |i, j| delta[bl.offset + i * bl.cols + j]))
        };
        for (k, &(dn, dm)) in keys.iter().zip(&dims) {
            let gm = m.grade_index(k);
            for op in amb.ops() {
                let tk = amb.op_target(k, op);
                let (tn, tm) = (n.dim_at_key(&tk), m.dim_at_key(&tk));
                let mut x = Mat::zeros(tn + tm, dn + dm);
                if let Some(y) = n_op(n, k, op) {
                    x.set_block(0, 0, &y);
                }
                if let Some(y) = block(gm, op) {
                    x.set_block(0, dn, &y);
                }
                if let Some((_, y)) = gm.and_then(|g| m_op(m, g, op)) {
                    x.set_block(tn, dn, &y);
                }
                match op {
                    Op::A(i) => b.amap(k, i, x),
                    Op::E(r) => b.emap(k, r, x),
                }
            }
        }
        let e = b.build();
        let incl = Morphism {
            maps: n
                .keys
                .iter()
                .map(|k| {
                    let (dn, dm) = (n.dim_at_key(k), m.dim_at_key(k));
                    Mat::identity(dn).vstack(&Mat::zeros(dm, dn))
                })
                .collect(),
        };
        let proj = Morphism {
            maps: e
                .keys
                .iter()
                .map(|k| {
                    let (dn, dm) = (n.dim_at_key(k), m.dim_at_key(k));
                    Mat::zeros(dm, dn).hstack(&Mat::identity(dm))
                })
                .collect(),
        };
        (e, incl, proj)
    }

    /// Extension for the `i`-th basis class.
    pub fn class_extension(&self, i: usize) -> (GradedModule<S>, Morphism<S>, Morphism<S>) {
        self.extension(&self.classes[i])
    }
}
