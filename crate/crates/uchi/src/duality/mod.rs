//! The dualities `D` and `D-bar`, the `tau`-twist, and checks of the
//! anti-equivalence.
//!
//! The `A`-linear dual of a grade is realised as its `F`-linear dual with the
//! transposed `A`-action; for the local Frobenius algebras used here the two
//! agree through the Frobenius form.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::Derived;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::gradedmod::{hom_space, Ambient, GradedModule, ModuleBuilder, Morphism, SubalgebraSpec};
use crate::lattice::Weight;
use crate::linalg::Mat;
use crate::rootdata::{tau, TauMap};

/// One of the (contra- or co-variant) functors of this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Duality {
    /// `M -> Hom_A(M, A)`, negated grading, `-chi`, base `A-bar`
    Hom,
    /// `M -> ^tau M`
    Twist,
    /// inverse of [`Duality::Twist`]
    Untwist,
    /// `D = Twist . Hom`
    D,
    /// `D-bar = Hom . Untwist`
    DBar,
}

impl Duality {
    pub fn is_contravariant(self) -> bool {
        matches!(self, Duality::Hom | Duality::D | Duality::DBar)
    }

    pub fn apply<S: Scalar>(self, m: &GradedModule<S>) -> Result<GradedModule<S>> {
        match self {
            Duality::Hom => dual_hom(m),
            Duality::Twist => tau_twist(m),
            Duality::Untwist => tau_untwist(m),
            Duality::D => dual_d(m),
            Duality::DBar => dual_dbar(m),
        }
    }

    /// The image of `f: src -> tgt`, a map `F(tgt) -> F(src)` when
    /// contravariant and `F(src) -> F(tgt)` otherwise.
    pub fn apply_morphism<S: Scalar>(self, f: &Morphism<S>, src: &GradedModule<S>, tgt: &GradedModule<S>) -> Result<Morphism<S>> {
        match self {
            Duality::Hom => dual_hom_morphism(f, src, tgt),
            Duality::Twist | Duality::Untwist => {
                let t = tau(src.datum(), &src.ambient().levi)?;
                let twisted = self.apply(src)?;
                Ok(relabel(f, src, tgt, &twisted, |k| src.ambient().key(&t.on_weight(k)), false))
            }
            Duality::D => {
                let h = dual_hom_morphism(f, src, tgt)?;
                let (dt, ds) = (dual_hom(tgt)?, dual_hom(src)?);
                Duality::Twist.apply_morphism(&h, &dt, &ds)
            }
            Duality::DBar => {
                let u = Duality::Untwist.apply_morphism(f, src, tgt)?;
                let (us, ut) = (tau_untwist(src)?, tau_untwist(tgt)?);
                dual_hom_morphism(&u, &us, &ut)
            }
        }
    }
}

/// Ambient of the dual: `-chi` and base `A-bar`.
fn dual_ambient<S: Scalar>(amb: &Ambient<S>) -> Result<Arc<Ambient<S>>> {
    let chi = amb.chi.iter().map(|c| -c).collect();
    let base = Arc::new(amb.base.derived(Derived::Bar, None)?);
    Ambient::new(amb.datum.clone(), amb.levi.clone(), chi, base, amb.spec, amb.grading)
}

/// Grade-wise dual with negated grading and the action `(x f)(m) = f(-x m)`.
pub fn dual_hom<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    let amb = m.ambient();
    let mut b = ModuleBuilder::new(dual_ambient(amb)?);
    let nroots = amb.datum.num_roots();
    for (g, k) in m.keys().iter().enumerate() {
        let nk = -*k;
        b.grade(&nk, m.dims()[g]);
        for i in 1..amb.base.dim() {
            b.amap(&nk, i, m.a(g, i).transpose());
        }
    }
    for g in 0..m.num_grades() {
        for r in 0..nroots {
            if let Some((t, e)) = m.e(g, r) {
                b.emap(&-m.keys()[t], r, e.transpose().neg());
            }
        }
    }
    Ok(b.build())
}

/// The spec whose acting roots are `target` of those acting for `spec`.
fn twisted_spec<S: Scalar>(amb: &Ambient<S>, t: &TauMap) -> Result<SubalgebraSpec> {
    let want: Vec<bool> = (0..amb.datum.num_roots()).map(|r| amb.acts(t.target[r])).collect();
    let all = [
        amb.spec,
        SubalgebraSpec::Full,
        SubalgebraSpec::Borel,
        SubalgebraSpec::Torus,
        SubalgebraSpec::Levi,
        SubalgebraSpec::LeviPlus,
        SubalgebraSpec::LeviMinus,
        SubalgebraSpec::LeviBorel,
    ];
    all.into_iter()
        .find(|s| (0..want.len()).all(|r| s.acts(&amb.datum, &amb.levi, r) == want[r]))
        .ok_or_else(|| Error::WrongSubalgebra(format!("no subalgebra is the tau-image of {}", amb.spec.name())))
}

/// Ambient of the twist (or untwist) and the root-vector coefficients used.
fn twist_data<S: Scalar>(amb: &Ambient<S>, inverse: bool) -> Result<(Arc<Ambient<S>>, Vec<i64>)> {
    let t = tau(&amb.datum, &amb.levi)?;
    let coef = if inverse { t.coef.clone() } else { t.inv_coef.clone() };
    let chi = (0..amb.datum.num_roots()).map(|b| coef[b] * amb.chi[t.target[b]]).collect();
    let base = if inverse {
        amb.base.derived(Derived::DBar, Some(&t))?.derived(Derived::Bar, None)?
    } else {
        amb.base.derived(Derived::Tau, Some(&t))?
    };
    let spec = twisted_spec(amb, &t)?;
    Ok((Ambient::new(amb.datum.clone(), amb.levi.clone(), chi, Arc::new(base), spec, amb.grading)?, coef))
}

fn twist_impl<S: Scalar>(m: &GradedModule<S>, inverse: bool) -> Result<GradedModule<S>> {
    let amb = m.ambient();
    let t = tau(&amb.datum, &amb.levi)?;
    let (namb, coef) = twist_data(amb, inverse)?;
    let mut b = ModuleBuilder::new(namb);
    for (g, k) in m.keys().iter().enumerate() {
        let nk = t.on_weight(k);
        b.grade(&nk, m.dims()[g]);
        for i in 1..amb.base.dim() {
            b.amap(&nk, i, m.a(g, i).clone());
        }
        for r in 0..amb.datum.num_roots() {
            if let Some((_, e)) = m.e(g, r) {
                let beta = t.target[r];
                b.emap(&nk, beta, e.scale(S::from_i64(coef[beta])));
            }
        }
    }
    Ok(b.build())
}

/// `^tau M`: grade `lambda` of `M` placed at `tau(lambda)`, with `x` acting
/// as `tau^{-1}(x)`.
pub fn tau_twist<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    twist_impl(m, false)
}

/// Inverse of [`tau_twist`].
pub fn tau_untwist<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    twist_impl(m, true)
}

/// `D(M) = ^tau Hom_A(M, A)`.
pub fn dual_d<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    tau_twist(&dual_hom(m)?)
}

/// `D-bar(M) = Hom(^{tau^{-1}} M, A)`.
pub fn dual_dbar<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    dual_hom(&tau_untwist(m)?)
}

/// Reindexes the grade maps of `f: src -> tgt` onto the grades of `new`;
/// `back` sends a key of `new` to the matching key of the old modules.
fn relabel<S: Scalar>(
    f: &Morphism<S>,
    src: &GradedModule<S>,
    tgt: &GradedModule<S>,
    new: &GradedModule<S>,
    back: impl Fn(&Weight) -> Weight,
    contra: bool,
) -> Morphism<S> {
    let maps = new
        .keys()
        .iter()
        .map(|k| {
            let old = back(k);
            let (from, to) = if contra { (tgt, src) } else { (src, tgt) };
            match src.grade_index(&old) {
                Some(s) if contra => f.maps[s].transpose(),
                Some(s) => f.maps[s].clone(),
                None => Mat::zeros(to.dim_at_key(&old), from.dim_at_key(&old)),
            }
        })
        .collect();
    Morphism { maps }
}

/// `Hom(f, A)`: the transpose `Hom(tgt, A) -> Hom(src, A)`.
fn dual_hom_morphism<S: Scalar>(f: &Morphism<S>, src: &GradedModule<S>, tgt: &GradedModule<S>) -> Result<Morphism<S>> {
    let dt = dual_hom(tgt)?;
    Ok(relabel(f, src, tgt, &dt, |k| src.ambient().key(&-*k), true))
}

/// The biduality map `M -> D-bar D M`, defined for `A`-free `M`.
pub fn biduality<S: Scalar>(m: &GradedModule<S>) -> Result<(GradedModule<S>, Morphism<S>)> {
    if !m.is_free() {
        return Err(Error::InvalidInput("biduality needs an A-free module".into()));
    }
    let dd = dual_dbar(&dual_d(m)?)?;
    let id = Morphism::identity(m);
    if !id.is_iso(m, &dd) || !id.is_morphism(m, &dd) {
        return Err(Error::InvalidInput("double dual does not match".into()));
    }
    Ok((dd, id))
}

/// Socle of `M`, as `D-bar` of the head of `D M`.
pub fn socle<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    let (h, _) = dual_d(m)?.head();
    dual_dbar(&h)
}

/// Counters from [`check_antiequivalence`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiReport {
    pub pairs: usize,
    pub hom_mismatches: Vec<(usize, usize)>,
    pub maps_checked: usize,
    pub bad_maps: usize,
    pub compositions: usize,
    pub bad_compositions: usize,
    pub identities_bad: usize,
    pub exact_checked: usize,
    pub exact_bad: usize,
}

impl AntiReport {
    pub fn passed(&self) -> bool {
        self.hom_mismatches.is_empty()
            && self.bad_maps == 0
            && self.bad_compositions == 0
            && self.identities_bad == 0
            && self.exact_bad == 0
    }
}

fn random_morphism<S: Scalar>(src: &GradedModule<S>, tgt: &GradedModule<S>, rng: &mut ChaCha8Rng) -> Result<Morphism<S>> {
    let h = hom_space(src, tgt)?;
    let coef: Vec<S> = (0..h.dim()).map(|_| S::from_i64(rng.gen_range(0..S::CHAR as i64))).collect();
    Ok(h.combine(&coef, src, tgt))
}

/// Checks that `D` is a contravariant functor preserving Hom dimensions on
/// the sample modules, sends identities to identities and short exact
/// sequences `0 -> rad M -> M -> head M -> 0` to short exact sequences.
pub fn check_antiequivalence<S: Scalar>(samples: &[GradedModule<S>], seed: u64) -> Result<AntiReport> {
    if samples.iter().any(|m| !m.base().is_field()) {
        return Err(Error::NeedsField);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let duals: Vec<GradedModule<S>> = samples.iter().map(dual_d).collect::<Result<_>>()?;
    let mut rep = AntiReport::default();
    for (i, m) in samples.iter().enumerate() {
        let id = Duality::D.apply_morphism(&Morphism::identity(m), m, m)?;
        if id != Morphism::identity(&duals[i]) {
            rep.identities_bad += 1;
        }
        let rad = m.radical();
        let (r, incl) = m.sub_module(&rad);
        let (h, proj) = m.quotient(&rad);
        let di = Duality::D.apply_morphism(&incl, &r, m)?;
        let dp = Duality::D.apply_morphism(&proj, m, &h)?;
        let (dr, dh) = (dual_d(&r)?, dual_d(&h)?);
        rep.exact_checked += 1;
        let comp = dp.then(&di, &dh, &duals[i], &dr);
        let exact = dp.rank() == dh.dim() && di.rank() == dr.dim() && comp.is_zero() && dh.dim() + dr.dim() == duals[i].dim();
        if !exact || !dp.is_morphism(&dh, &duals[i]) || !di.is_morphism(&duals[i], &dr) {
            rep.exact_bad += 1;
        }
    }
    for i in 0..samples.len() {
        for j in 0..samples.len() {
            if samples[i].ambient() != samples[j].ambient() {
                continue;
            }
            rep.pairs += 1;
            let (m, n) = (&samples[i], &samples[j]);
            let h = hom_space(m, n)?;
            if h.dim() != hom_space(&duals[j], &duals[i])?.dim() {
                rep.hom_mismatches.push((i, j));
            }
            for f in &h.basis {
                rep.maps_checked += 1;
                let df = Duality::D.apply_morphism(f, m, n)?;
                if !df.is_morphism(&duals[j], &duals[i]) {
                    rep.bad_maps += 1;
                }
            }
            for (k, p) in samples.iter().enumerate() {
                if p.ambient() != m.ambient() || h.dim() == 0 {
                    continue;
                }
                let f = random_morphism(m, n, &mut rng)?;
                let g = random_morphism(n, p, &mut rng)?;
                let gf = f.then(&g, m, n, p);
                let lhs = Duality::D.apply_morphism(&gf, m, p)?;
                let dg = Duality::D.apply_morphism(&g, n, p)?;
                let df = Duality::D.apply_morphism(&f, m, n)?;
                let rhs = dg.then(&df, &duals[k], &duals[j], &duals[i]);
                rep.compositions += 1;
                if lhs != rhs {
                    rep.bad_compositions += 1;
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests;
