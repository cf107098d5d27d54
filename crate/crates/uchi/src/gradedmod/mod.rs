//! Graded modules over `U_chi (x) A` and their morphisms, in the `X/pZI` model.

mod change;
mod ext;
mod hom;
mod ops;
mod radical;
mod split;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::BaseAlgebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lattice::Weight;
use crate::linalg::{zero_vec, Mat};
use crate::rootdata::{build_from_type, build_gl, standard_levi_chi, ChevalleyDatum, DatumKind, DatumRef, LeviSpec};
use crate::weyl::Cosets;

pub use change::BaseChange;
pub use ext::Ext1;
pub use hom::{hom_space, hom_space_with, GeneratedSystem, Generators, HomSpace};
pub use ops::{DirectSum, Filtration, Submodule};
pub use radical::{radical_series, RadicalHead};
pub use split::{Summand, MAX_SPLIT_ATTEMPTS};

/// Which root vectors act: the subalgebra generated by `U^0` and these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubalgebraSpec {
    /// `U_chi`
    Full,
    /// `U^0 U^+`
    Borel,
    /// `U^0`
    Torus,
    /// `U^I`
    Levi,
    /// `U^I U_I^+`
    LeviPlus,
    /// `U_I^- U^I`
    LeviMinus,
    /// `U^0 U_I^+`, the Borel part of `U^I`
    LeviBorel,
}

impl SubalgebraSpec {
    pub fn acts(self, datum: &ChevalleyDatum, levi: &LeviSpec, root: usize) -> bool {
        let in_levi = levi.contains_root(datum, root);
        let pos = datum.is_positive(root);
        match self {
            SubalgebraSpec::Full => true,
            SubalgebraSpec::Borel => pos,
            SubalgebraSpec::Torus => false,
            SubalgebraSpec::Levi => in_levi,
            SubalgebraSpec::LeviPlus => in_levi || pos,
            SubalgebraSpec::LeviMinus => in_levi || !pos,
            SubalgebraSpec::LeviBorel => in_levi && pos,
        }
    }

    pub fn roots(self, datum: &ChevalleyDatum, levi: &LeviSpec) -> Vec<usize> {
        (0..datum.num_roots()).filter(|&r| self.acts(datum, levi, r)).collect()
    }

    /// Whether every root acting for `other` also acts for `self`.
    pub fn contains(self, other: SubalgebraSpec, datum: &ChevalleyDatum, levi: &LeviSpec) -> bool {
        (0..datum.num_roots()).all(|r| !other.acts(datum, levi, r) || self.acts(datum, levi, r))
    }

    pub fn name(self) -> &'static str {
        match self {
            SubalgebraSpec::Full => "U",
            SubalgebraSpec::Borel => "U0U+",
            SubalgebraSpec::Torus => "U0",
            SubalgebraSpec::Levi => "UI",
            SubalgebraSpec::LeviPlus => "UIU+",
            SubalgebraSpec::LeviMinus => "U-UI",
            SubalgebraSpec::LeviBorel => "U0UI+",
        }
    }
}

/// Grading group: `X/pZI`, or `X` itself for the hatted categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grading {
    PZI,
    X,
}

/// Everything a module lives over.
#[derive(Clone, Debug)]
pub struct Ambient<S: Scalar> {
    pub datum: DatumRef,
    pub levi: LeviSpec,
    /// `chi(e_alpha)` per root, reduced into `0..p`
    pub chi: Vec<i64>,
    pub base: Arc<BaseAlgebra<S>>,
    pub spec: SubalgebraSpec,
    pub grading: Grading,
    cosets: Cosets,
    acting: Vec<bool>,
}

impl<S: Scalar> PartialEq for Ambient<S> {
    fn eq(&self, o: &Self) -> bool {
        *self.datum == *o.datum
            && self.levi == o.levi
            && self.chi == o.chi
            && *self.base == *o.base
            && self.spec == o.spec
            && self.grading == o.grading
    }
}

impl<S: Scalar> Ambient<S> {
    pub fn new(
        datum: DatumRef,
        levi: LeviSpec,
        chi: Vec<i64>,
        base: Arc<BaseAlgebra<S>>,
        spec: SubalgebraSpec,
        grading: Grading,
    ) -> Result<Arc<Self>> {
        if S::CHAR != datum.p {
            return Err(Error::AmbientMismatch(format!("scalar field F_{} over datum at p={}", S::CHAR, datum.p)));
        }
        if chi.len() != datum.num_roots() {
            return Err(Error::InvalidInput("chi needs one value per root".into()));
        }
        if base.rank() != datum.d {
            return Err(Error::InvalidInput(format!("base algebra has {} pi values, datum rank is {}", base.rank(), datum.d)));
        }
        let p = datum.p as i64;
        let chi = chi.into_iter().map(|c| c.rem_euclid(p)).collect();
        let cosets = Cosets::new(&datum, &levi);
        let acting = (0..datum.num_roots()).map(|r| spec.acts(&datum, &levi, r)).collect();
        Ok(Arc::new(Ambient { datum, levi, chi, base, spec, grading, cosets, acting }))
    }

    /// Standard Levi form `chi` for `levi`.
    pub fn standard(datum: DatumRef, levi: LeviSpec, base: Arc<BaseAlgebra<S>>, spec: SubalgebraSpec) -> Result<Arc<Self>> {
        let chi = standard_levi_chi(&datum, &levi).values;
        Self::new(datum, levi, chi, base, spec, Grading::PZI)
    }

    pub fn with_spec(&self, spec: SubalgebraSpec) -> Arc<Self> {
        Self::new(self.datum.clone(), self.levi.clone(), self.chi.clone(), self.base.clone(), spec, self.grading).unwrap()
    }

    pub fn with_base(&self, base: Arc<BaseAlgebra<S>>) -> Result<Arc<Self>> {
        Self::new(self.datum.clone(), self.levi.clone(), self.chi.clone(), base, self.spec, self.grading)
    }

    pub fn with_chi(&self, chi: Vec<i64>) -> Arc<Self> {
        Self::new(self.datum.clone(), self.levi.clone(), chi, self.base.clone(), self.spec, self.grading).unwrap()
    }

    pub fn with_grading(&self, grading: Grading) -> Arc<Self> {
        Self::new(self.datum.clone(), self.levi.clone(), self.chi.clone(), self.base.clone(), self.spec, grading).unwrap()
    }

    pub fn cosets(&self) -> &Cosets {
        &self.cosets
    }

    /// Canonical grade key of a weight.
    pub fn key(&self, w: &Weight) -> Weight {
        match self.grading {
            Grading::PZI => self.cosets.pzi(w).0,
            Grading::X => *w,
        }
    }

    pub fn shift(&self, key: &Weight, root: usize) -> Weight {
        self.key(&(*key + self.datum.root(root)))
    }

    pub fn acts(&self, root: usize) -> bool {
        self.acting[root]
    }

    pub fn acting_roots(&self) -> Vec<usize> {
        (0..self.acting.len()).filter(|&r| self.acting[r]).collect()
    }

    /// Generators of the action: acting root vectors, then `b_1, b_2, ...`.
    pub fn ops(&self) -> Vec<Op> {
        let mut v: Vec<Op> = self.acting_roots().into_iter().map(Op::E).collect();
        v.extend((1..self.base.dim()).map(Op::A));
        v
    }

    pub fn op_target(&self, key: &Weight, op: Op) -> Weight {
        match op {
            Op::E(r) => self.shift(key, r),
            Op::A(_) => *key,
        }
    }

    pub fn chi(&self, root: usize) -> S {
        S::from_i64(self.chi[root])
    }

    /// Element of `A` by which `h_j` acts on the grade `key`.
    pub fn toral_elem(&self, key: &Weight, j: usize) -> Vec<S> {
        let mut v = self.base.pi[j].clone();
        v[0] += S::from_i64(key.coords()[j] as i64);
        v
    }

    /// Element of `A` by which `h = sum_j c_j h_j` acts on the grade `key`.
    pub fn toral_comb(&self, key: &Weight, h: &[i64]) -> Vec<S> {
        let mut v = zero_vec(self.base.dim());
        for (j, &c) in h.iter().enumerate() {
            if c != 0 {
                let t = self.toral_elem(key, j);
                crate::linalg::axpy(&mut v, S::from_i64(c), &t);
            }
        }
        v
    }

    /// Element of `A` by which `[e_root, e_{-root}]` acts on the grade `key`.
    pub fn coroot_elem(&self, key: &Weight, root: usize) -> Vec<S> {
        let h: Vec<i64> = self.datum.coroot(root).iter().map(|&c| c as i64).collect();
        self.toral_comb(key, &h)
    }

    pub fn require_same(&self, other: &Ambient<S>) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(format!(
                "{} {} chi={:?} vs {} {} chi={:?}",
                self.datum.name(),
                self.spec.name(),
                self.chi,
                other.datum.name(),
                other.spec.name(),
                other.chi
            )))
        }
    }

    fn descriptor(&self) -> AmbientDump<S> {
        AmbientDump {
            datum: self.datum.kind.clone(),
            p: self.datum.p,
            levi: self.levi.simple.clone(),
            chi: self.chi.clone(),
            base: (*self.base).clone(),
            spec: self.spec,
            grading: self.grading,
        }
    }
}

/// A generator of the action algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    /// root vector `e_alpha`
    E(usize),
    /// basis element `b_i` of `A`, `i >= 1`
    A(usize),
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::E(r) => write!(f, "e[{r}]"),
            Op::A(i) => write!(f, "b[{i}]"),
        }
    }
}

/// An object of the category: finitely many grades, right `A`-action and
/// root-vector maps between grades.
#[derive(Clone, Debug)]
pub struct GradedModule<S: Scalar> {
    amb: Arc<Ambient<S>>,
    keys: Vec<Weight>,
    dims: Vec<usize>,
    index: HashMap<Weight, usize>,
    /// `amaps[g][i - 1]` is the action of `b_i`
    amaps: Vec<Vec<Mat<S>>>,
    /// `emaps[g][root]` is the target grade and matrix, `None` when zero
    emaps: Vec<Vec<Option<(usize, Mat<S>)>>>,
}

impl<S: Scalar> PartialEq for GradedModule<S> {
    fn eq(&self, o: &Self) -> bool {
        *self.amb == *o.amb && self.keys == o.keys && self.dims == o.dims && self.amaps == o.amaps && self.emaps == o.emaps
    }
}

/// Incremental construction of a [`GradedModule`].
#[derive(Clone, Debug)]
pub struct ModuleBuilder<S: Scalar> {
    amb: Arc<Ambient<S>>,
    grades: BTreeMap<Weight, usize>,
    amaps: HashMap<(Weight, usize), Mat<S>>,
    emaps: HashMap<(Weight, usize), Mat<S>>,
}

impl<S: Scalar> ModuleBuilder<S> {
    pub fn new(amb: Arc<Ambient<S>>) -> Self {
        ModuleBuilder { amb, grades: BTreeMap::new(), amaps: HashMap::new(), emaps: HashMap::new() }
    }

    /// Declares a grade; the weight is reduced to its key.
    pub fn grade(&mut self, w: &Weight, dim: usize) -> Weight {
        let k = self.amb.key(w);
        self.grades.insert(k, dim);
        k
    }

    pub fn amap(&mut self, w: &Weight, i: usize, m: Mat<S>) {
        let k = self.amb.key(w);
        self.amaps.insert((k, i), m);
    }

    pub fn emap(&mut self, w: &Weight, root: usize, m: Mat<S>) {
        let k = self.amb.key(w);
        self.emaps.insert((k, root), m);
    }

    pub fn build(self) -> GradedModule<S> {
        let amb = self.amb;
        let (keys, dims): (Vec<Weight>, Vec<usize>) = self.grades.into_iter().filter(|(_, d)| *d > 0).unzip();
        let index: HashMap<Weight, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let m = amb.base.dim();
        let nroots = amb.datum.num_roots();
        let mut amaps = Vec::with_capacity(keys.len());
        let mut emaps = Vec::with_capacity(keys.len());
        for (g, k) in keys.iter().enumerate() {
            let d = dims[g];
            amaps.push((1..m).map(|i| self.amaps.get(&(*k, i)).cloned().unwrap_or_else(|| Mat::zeros(d, d))).collect());
            let row: Vec<Option<(usize, Mat<S>)>> = (0..nroots)
                .map(|r| {
                    let mat = self.emaps.get(&(*k, r))?;
                    let t = *index.get(&amb.shift(k, r))?;
                    if mat.is_zero() {
                        return None;
                    }
                    debug_assert_eq!((mat.rows(), mat.cols()), (dims[t], d));
                    Some((t, mat.clone()))
                })
                .collect();
            emaps.push(row);
        }
        GradedModule { amb, keys, dims, index, amaps, emaps }
    }
}

impl<S: Scalar> GradedModule<S> {
    pub fn zero(amb: Arc<Ambient<S>>) -> Self {
        ModuleBuilder::new(amb).build()
    }

    pub fn ambient(&self) -> &Arc<Ambient<S>> {
        &self.amb
    }

    pub fn datum(&self) -> &ChevalleyDatum {
        &self.amb.datum
    }

    pub fn base(&self) -> &BaseAlgebra<S> {
        &self.amb.base
    }

    pub fn keys(&self) -> &[Weight] {
        &self.keys
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_grades(&self) -> usize {
        self.keys.len()
    }

    /// Total dimension over `F_p`.
    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn grade_index(&self, key: &Weight) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn dim_at_key(&self, key: &Weight) -> usize {
        self.grade_index(key).map_or(0, |g| self.dims[g])
    }

    /// Offsets of each grade in the flattened basis.
    pub fn offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.keys.len() + 1);
        let mut s = 0;
        for &d in &self.dims {
            o.push(s);
            s += d;
        }
        o.push(s);
        o
    }

    /// Root map at grade `g`: target grade and matrix, `None` when zero.
    pub fn e(&self, g: usize, root: usize) -> Option<(usize, &Mat<S>)> {
        self.emaps[g][root].as_ref().map(|(t, m)| (*t, m))
    }

    /// Action of `b_i`, `i >= 1`, on grade `g`.
    pub fn a(&self, g: usize, i: usize) -> &Mat<S> {
        &self.amaps[g][i - 1]
    }

    /// Matrix of right multiplication by `x in A` on grade `g`.
    pub fn a_elem(&self, g: usize, x: &[S]) -> Mat<S> {
        let mut m = Mat::scalar(self.dims[g], x[0]);
        for (i, &c) in x.iter().enumerate().skip(1) {
            if !c.is_zero() {
                m.axpy(c, self.a(g, i));
            }
        }
        m
    }

    /// Action of `h_j` on grade `g`.
    pub fn toral(&self, g: usize, j: usize) -> Mat<S> {
        self.a_elem(g, &self.amb.toral_elem(&self.keys[g], j))
    }

    /// Target grade index (if present) and matrix of a generator at grade `g`.
    pub fn op(&self, g: usize, op: Op) -> (Weight, Option<(usize, &Mat<S>)>) {
        match op {
            Op::E(r) => (self.amb.shift(&self.keys[g], r), self.e(g, r)),
            Op::A(i) => (self.keys[g], Some((g, self.a(g, i)))),
        }
    }

    /// Applies a generator to a vector of grade `g`; `None` when the result is zero.
    pub fn apply_op(&self, g: usize, op: Op, v: &[S]) -> Option<(usize, Vec<S>)> {
        self.op(g, op).1.map(|(t, m)| (t, m.mul_vec(v)))
    }

    /// Matrix of `e_{w_k} ... e_{w_1}` starting at grade `g`, with the key reached.
    pub fn word(&self, g: usize, word: &[usize]) -> (Weight, Option<(usize, Mat<S>)>) {
        let mut key = self.keys[g];
        let mut cur: Option<(usize, Mat<S>)> = Some((g, Mat::identity(self.dims[g])));
        for &r in word {
            key = self.amb.shift(&key, r);
            cur = match cur {
                Some((h, m)) => self.e(h, r).map(|(t, e)| (t, e.mul(&m))),
                None => None,
            };
        }
        (key, cur)
    }

    /// Same data, read in another ambient. Used by relabelling functors.
    pub fn reambient(&self, amb: Arc<Ambient<S>>) -> Self {
        debug_assert_eq!(amb.base.dim(), self.amb.base.dim());
        let mut out = self.clone();
        out.amb = amb;
        out
    }

    /// Replaces one root map, bypassing all checks.
    #[doc(hidden)]
    pub fn with_raw_emap(&self, g: usize, root: usize, target: usize, m: Mat<S>) -> Self {
        let mut out = self.clone();
        out.emaps[g][root] = Some((target, m));
        out
    }

    /// Builder pre-filled with this module's data.
    pub fn to_builder(&self) -> ModuleBuilder<S> {
        let mut b = ModuleBuilder::new(self.amb.clone());
        for (g, k) in self.keys.iter().enumerate() {
            b.grade(k, self.dims[g]);
            for i in 1..self.amb.base.dim() {
                b.amap(k, i, self.a(g, i).clone());
            }
            for r in 0..self.amb.datum.num_roots() {
                if let Some((_, m)) = self.e(g, r) {
                    b.emap(k, r, m.clone());
                }
            }
        }
        b
    }

    /// Checks every defining condition; an empty report means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let amb = &self.amb;
        let base = &amb.base;
        let m = base.dim();
        let datum = &amb.datum;
        let p = datum.p as u64;
        let viol = |cond: &str, key: &Weight, gen: String, detail: String| Violation {
            condition: cond.to_string(),
            grade: *key,
            generator: gen,
            detail,
        };
        for (g, key) in self.keys.iter().enumerate() {
            let d = self.dims[g];
            if amb.key(key) != *key {
                out.push(viol("B'", key, String::new(), "grade key is not canonical".into()));
            }
            // A-module structure
            for i in 1..m {
                if self.amaps[g][i - 1].rows() != d || self.amaps[g][i - 1].cols() != d {
                    out.push(viol("A'", key, format!("b[{i}]"), "A-action does not preserve the grade".into()));
                    continue;
                }
                for j in 1..m {
                    let lhs = self.a(g, j).mul(self.a(g, i));
                    let ij = base_product(base, i, j);
                    if lhs != self.a_elem(g, &ij) {
                        out.push(viol("A'", key, format!("b[{i}]b[{j}]"), "A-action is not multiplicative".into()));
                    }
                }
            }
            for r in 0..datum.num_roots() {
                let Some((t, e)) = self.e(g, r) else { continue };
                if !amb.acts(r) {
                    out.push(viol("spec", key, format!("e[{r}]"), "root does not act in this subalgebra".into()));
                    continue;
                }
                let want = amb.shift(key, r);
                if t >= self.keys.len() || self.keys[t] != want {
                    out.push(viol("C'", key, format!("e[{r}]"), format!("map lands in wrong grade, expected {want}")));
                    continue;
                }
                if e.rows() != self.dims[t] || e.cols() != d {
                    out.push(viol("C'", key, format!("e[{r}]"), "map has wrong shape".into()));
                    continue;
                }
                for i in 1..m {
                    if e.mul(self.a(g, i)) != self.a(t, i).mul(e) {
                        out.push(viol("A'", key, format!("e[{r}],b[{i}]"), "root map is not A-linear".into()));
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        let acting = amb.acting_roots();
        for (g, key) in self.keys.iter().enumerate() {
            let d = self.dims[g];
            for (ia, &a) in acting.iter().enumerate() {
                // p-th power
                let (tk, pw) = self.word(g, &vec![a; p as usize]);
                let c = amb.chi(a);
                let want = if tk == *key { Mat::scalar(d, Scalar::pow(c, p)) } else { Mat::zeros(self.dim_at_key(&tk), d) };
                if tk != *key && !c.is_zero() && self.dim_at_key(&tk) == 0 {
                    out.push(viol("relation", key, format!("e[{a}]^p"), "chi is nonzero but e^p leaves the grade".into()));
                }
                if mat_or_zero(pw.map(|x| x.1), self.dim_at_key(&tk), d) != want {
                    out.push(viol("relation", key, format!("e[{a}]^p"), format!("e^p differs from chi^p = {}", Scalar::pow(c, p))));
                }
                for &b in &acting[ia + 1..] {
                    let (tk, ab) = self.word(g, &[b, a]);
                    let (_, ba) = self.word(g, &[a, b]);
                    let rows = self.dim_at_key(&tk);
                    if rows == 0 {
                        continue;
                    }
                    let lhs = mat_or_zero(ab.map(|x| x.1), rows, d).sub(&mat_or_zero(ba.map(|x| x.1), rows, d));
                    let rhs = if b == datum.neg(a) {
                        self.a_elem(g, &amb.coroot_elem(key, a))
                    } else if let Some(s) = datum.sum_root(a, b) {
                        let n = S::from_i64(datum.n_const(a, b) as i64);
                        mat_or_zero(self.e(g, s).map(|x| x.1.clone()), rows, d).scale(n)
                    } else {
                        Mat::zeros(rows, d)
                    };
                    if lhs != rhs {
                        out.push(viol("relation", key, format!("[e[{a}],e[{b}]]"), "bracket relation fails".into()));
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Whether each grade is free over `A`.
    pub fn is_free(&self) -> bool {
        let m = self.amb.base.dim();
        (0..self.keys.len()).all(|g| {
            let d = self.dims[g];
            if d % m != 0 {
                return false;
            }
            // M_g / M_g m has dimension d / dim A
            let mut span = crate::linalg::Span::new(d);
            for x in self.amb.base.maximal_ideal() {
                for v in self.a_elem(g, x).column_space() {
                    span.insert(v);
                }
            }
            d - span.dim() == d / m
        })
    }

    /// Rank over `A` when free.
    pub fn rank_over_base(&self) -> Option<usize> {
        self.is_free().then(|| self.dim() / self.amb.base.dim())
    }

    pub fn dump(&self) -> ModuleDump<S> {
        let sparse = |m: &Mat<S>| -> Vec<(usize, usize, S)> {
            let mut v = Vec::new();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let x = m.get(i, j);
                    if !x.is_zero() {
                        v.push((i, j, x));
                    }
                }
            }
            v
        };
        let mut amaps = Vec::new();
        let mut emaps = Vec::new();
        for (g, k) in self.keys.iter().enumerate() {
            for i in 1..self.amb.base.dim() {
                amaps.push(AMapDump { grade: *k, index: i, entries: sparse(self.a(g, i)) });
            }
            for r in 0..self.amb.datum.num_roots() {
                if let Some((t, m)) = self.e(g, r) {
                    emaps.push(EMapDump { grade: *k, root: r, target: self.keys[t], entries: sparse(m) });
                }
            }
        }
        ModuleDump {
            ambient: self.amb.descriptor(),
            grades: self.keys.iter().copied().zip(self.dims.iter().copied()).collect(),
            amaps,
            emaps,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.dump()).expect("module dumps serialize")
    }

    pub fn from_dump(d: &ModuleDump<S>) -> Result<Self> {
        let a = &d.ambient;
        let datum = match &a.datum {
            DatumKind::Gl(n) => build_gl(*n, a.p)?,
            DatumKind::Cartan(t) => build_from_type(t, a.p)?,
        };
        let datum = Arc::new(datum);
        let levi = LeviSpec::new(&datum, a.levi.clone())?;
        let amb = Ambient::new(datum, levi, a.chi.clone(), Arc::new(a.base.clone()), a.spec, a.grading)?;
        let dense = |rows: usize, cols: usize, e: &[(usize, usize, S)]| -> Result<Mat<S>> {
            let mut m = Mat::zeros(rows, cols);
            for &(i, j, x) in e {
                if i >= rows || j >= cols {
                    return Err(Error::InvalidInput("matrix entry out of range".into()));
                }
                m.set(i, j, x);
            }
            Ok(m)
        };
        let mut b = ModuleBuilder::new(amb.clone());
        let dims: HashMap<Weight, usize> = d.grades.iter().copied().collect();
        for (k, n) in &d.grades {
            b.grade(k, *n);
        }
        for am in &d.amaps {
            let n = *dims.get(&am.grade).ok_or_else(|| Error::InvalidInput("unknown grade".into()))?;
            b.amap(&am.grade, am.index, dense(n, n, &am.entries)?);
        }
        let mut raw = Vec::new();
        for em in &d.emaps {
            let n = *dims.get(&em.grade).ok_or_else(|| Error::InvalidInput("unknown grade".into()))?;
            let t = *dims.get(&em.target).ok_or_else(|| Error::InvalidInput("unknown target grade".into()))?;
            raw.push((em.grade, em.root, em.target, dense(t, n, &em.entries)?));
        }
        let mut m = b.build();
        for (k, r, t, mat) in raw {
            let g = m.grade_index(&k).unwrap();
            let ti = m.grade_index(&t).unwrap();
            m.emaps[g][r] = Some((ti, mat));
        }
        Ok(m)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: ModuleDump<S> = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Self::from_dump(&d)
    }
}

pub(crate) fn base_product<S: Scalar>(base: &BaseAlgebra<S>, i: usize, j: usize) -> Vec<S> {
    let m = base.dim();
    base.mul(&crate::linalg::unit_vec(m, i), &crate::linalg::unit_vec(m, j))
}

pub(crate) fn mat_or_zero<S: Scalar>(m: Option<Mat<S>>, rows: usize, cols: usize) -> Mat<S> {
    m.unwrap_or_else(|| Mat::zeros(rows, cols))
}

/// A failed condition with the grade and generator where it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub grade: Weight,
    pub generator: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct AmbientDump<S: Scalar> {
    pub datum: DatumKind,
    pub p: u32,
    pub levi: Vec<usize>,
    pub chi: Vec<i64>,
    pub base: BaseAlgebra<S>,
    pub spec: SubalgebraSpec,
    pub grading: Grading,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct AMapDump<S> {
    pub grade: Weight,
    pub index: usize,
    pub entries: Vec<(usize, usize, S)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct EMapDump<S> {
    pub grade: Weight,
    pub root: usize,
    pub target: Weight,
    pub entries: Vec<(usize, usize, S)>,
}

/// JSON form of a module: ambient ids, grades, and sparse action matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct ModuleDump<S: Scalar> {
    pub ambient: AmbientDump<S>,
    pub grades: Vec<(Weight, usize)>,
    pub amaps: Vec<AMapDump<S>>,
    pub emaps: Vec<EMapDump<S>>,
}

/// A grade-preserving map; `maps[g]` acts on the source grade `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<S> {
    pub maps: Vec<Mat<S>>,
}

impl<S: Scalar> Morphism<S> {
    pub fn zero(src: &GradedModule<S>, tgt: &GradedModule<S>) -> Self {
        Morphism { maps: src.keys.iter().enumerate().map(|(g, k)| Mat::zeros(tgt.dim_at_key(k), src.dims[g])).collect() }
    }

    pub fn identity(m: &GradedModule<S>) -> Self {
        Morphism { maps: m.dims.iter().map(|&d| Mat::identity(d)).collect() }
    }

    /// `g . f` for `f: a -> b`, `g: b -> c`.
    pub fn then(&self, g: &Morphism<S>, a: &GradedModule<S>, b: &GradedModule<S>, c: &GradedModule<S>) -> Morphism<S> {
        Morphism {
            maps: a
                .keys
                .iter()
                .enumerate()
                .map(|(i, k)| match b.grade_index(k) {
                    Some(j) => g.maps[j].mul(&self.maps[i]),
                    None => Mat::zeros(c.dim_at_key(k), a.dims[i]),
                })
                .collect(),
        }
    }

    pub fn add(&self, o: &Morphism<S>) -> Morphism<S> {
        Morphism { maps: self.maps.iter().zip(&o.maps).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, o: &Morphism<S>) -> Morphism<S> {
        Morphism { maps: self.maps.iter().zip(&o.maps).map(|(x, y)| x.sub(y)).collect() }
    }

    pub fn scale(&self, c: S) -> Morphism<S> {
        Morphism { maps: self.maps.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(|m| m.rank()).sum()
    }

    /// Bijective on every grade of source and target.
    pub fn is_iso(&self, src: &GradedModule<S>, tgt: &GradedModule<S>) -> bool {
        src.dim() == tgt.dim() && self.maps.iter().all(|m| m.is_invertible())
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self, src: &GradedModule<S>, tgt: &GradedModule<S>) -> Option<Morphism<S>> {
        if !self.is_iso(src, tgt) {
            return None;
        }
        let mut maps = Vec::with_capacity(tgt.num_grades());
        for k in tgt.keys() {
            let g = src.grade_index(k)?;
            maps.push(self.maps[g].inverse()?);
        }
        Some(Morphism { maps })
    }

    /// Whether this commutes with every generator.
    pub fn is_morphism(&self, src: &GradedModule<S>, tgt: &GradedModule<S>) -> bool {
        if self.maps.len() != src.num_grades() {
            return false;
        }
        for (g, k) in src.keys.iter().enumerate() {
            if self.maps[g].rows() != tgt.dim_at_key(k) || self.maps[g].cols() != src.dims[g] {
                return false;
            }
        }
        for (g, k) in src.keys.iter().enumerate() {
            for op in src.amb.ops() {
                let (tk, sm) = src.op(g, op);
                let rows = tgt.dim_at_key(&tk);
                if rows == 0 {
                    continue;
                }
                // f . op on source
                let lhs = match (sm, src.grade_index(&tk)) {
                    (Some((t, m)), _) => self.maps[t].mul(m),
                    _ => Mat::zeros(rows, src.dims[g]),
                };
                let rhs = match tgt.grade_index(k) {
                    Some(tg) => match tgt.op(tg, op).1 {
                        Some((_, m)) => m.mul(&self.maps[g]),
                        None => Mat::zeros(rows, src.dims[g]),
                    },
                    None => Mat::zeros(rows, src.dims[g]),
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Block matrix on the flattened bases.
    pub fn full_matrix(&self, src: &GradedModule<S>, tgt: &GradedModule<S>) -> Mat<S> {
        let so = src.offsets();
        let to = tgt.offsets();
        let mut m = Mat::zeros(tgt.dim(), src.dim());
        for (g, k) in src.keys.iter().enumerate() {
            if let Some(t) = tgt.grade_index(k) {
                m.set_block(to[t], so[g], &self.maps[g]);
            }
        }
        m
    }

    /// Inverse of [`Morphism::full_matrix`]; off-grade entries are ignored.
    pub fn from_full_matrix(m: &Mat<S>, src: &GradedModule<S>, tgt: &GradedModule<S>) -> Self {
        let so = src.offsets();
        let to = tgt.offsets();
        Morphism {
            maps: src
                .keys
                .iter()
                .enumerate()
                .map(|(g, k)| match tgt.grade_index(k) {
                    Some(t) => m.submatrix(to[t], so[g], tgt.dims[t], src.dims[g]),
                    None => Mat::zeros(0, src.dims[g]),
                })
                .collect(),
        }
    }
}
