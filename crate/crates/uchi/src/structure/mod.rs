//! Distinguished objects: baby Verma modules and their isomorphisms, simple
//! heads, the equivalences `Theta`, Levi projectives and their inductions,
//! truncation, filtrations and projective covers.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::gradedmod::{Ambient, BaseChange, GeneratedSystem, GradedModule, Morphism, SubalgebraSpec, Submodule};
use crate::induction::{self, generator, Induced};
use crate::lattice::Weight;
use crate::weyl::{connecting_element, dot_reflect, leq_coset, Group};

mod filt;
mod mult;

pub use filt::{q_filtration, sort_z_filtration, z_filtration, z_order_holds};
pub use mult::{
    block_components, composition_factors, multiplicities, representatives, verify_blocks, verify_iso_criterion, BlockReport, IsoReport, MultKind,
    MultiplicityTable,
};

/// Seed used when no seed is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Which category a baby Verma module lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Full,
    Levi,
}

/// `Z_{A,chi}(lambda)` or `Z_{A,I,chi}(lambda)` with its generator.
pub fn baby_verma<S: Scalar>(amb: &Ambient<S>, lambda: &Weight, level: Level) -> Induced<S> {
    match level {
        Level::Full => induction::baby_verma(amb, lambda),
        Level::Levi => induction::levi_baby_verma(amb, lambda),
    }
}

/// The morphism out of an induced rank-one object sending its generator
/// to `v` in grade `g` of `tgt`, if one exists.
pub fn from_generator<S: Scalar>(src: &Induced<S>, tgt: &GradedModule<S>, g: usize, v: &[S]) -> Result<Option<Morphism<S>>> {
    let gen = generator(src);
    if src.module.keys()[gen.0] != tgt.keys()[g] {
        return Ok(None);
    }
    let sys = GeneratedSystem::new(&src.module, tgt, vec![gen])?;
    Ok(sys.from_images(&[v.to_vec()]))
}

fn check_vanishing<S: Scalar>(amb: &Ambient<S>, roots: &[usize]) -> Result<()> {
    if amb.base.check_levi_vanishing(&amb.datum, roots) {
        Ok(())
    } else {
        Err(Error::LeviVanishingViolated)
    }
}

fn levi_roots<S: Scalar>(amb: &Ambient<S>) -> Vec<usize> {
    amb.levi.roots(&amb.datum)
}

fn simple_root_index<S: Scalar>(amb: &Ambient<S>, i: usize) -> usize {
    amb.datum.root_index(&amb.datum.simple(i)).expect("simple roots are roots")
}

/// An explicit isomorphism `Z(lambda) -> Z(mu)` for `mu` in the
/// `W_{I,p}`-dot orbit of `lambda`.
#[derive(Clone, Debug)]
pub struct VermaIso<S: Scalar> {
    pub source: Induced<S>,
    pub target: Induced<S>,
    pub map: Morphism<S>,
    /// simple reflections used, in order of application
    pub steps: Vec<usize>,
}

/// The reflection map `Z(lambda - (a+1) alpha) -> Z(lambda)` sending the
/// generator to `e_{-alpha}^{a+1} v_lambda`, `a = <lambda, alpha^vee> mod p`.
pub fn reflection_map<S: Scalar>(amb: &Ambient<S>, lambda: &Weight, i: usize) -> Result<(Induced<S>, Induced<S>, Morphism<S>)> {
    let datum = &amb.datum;
    let p = datum.p as i64;
    let alpha = simple_root_index(amb, i);
    let a = datum.pairing(lambda, alpha).rem_euclid(p);
    let tgt = induction::baby_verma(amb, lambda);
    let src = induction::baby_verma(amb, &(*lambda - (a as i32 + 1) * datum.root(alpha)));
    let (mut g, mut v) = generator(&tgt);
    let neg = datum.neg(alpha);
    for _ in 0..=a {
        let (t, m) = tgt.module.e(g, neg).ok_or_else(|| Error::InvalidInput("e_{-alpha} does not act".into()))?;
        v = m.mul_vec(&v);
        g = t;
    }
    let f = from_generator(&src, &tgt.module, g, &v)?.ok_or(Error::LeviVanishingViolated)?;
    Ok((src, tgt, f))
}

/// Composes reflection maps along a word connecting `lambda` to `mu`, then
/// the translation by `p ZI`, which is the identity on the shared data.
pub fn verma_iso<S: Scalar>(amb: &Ambient<S>, lambda: &Weight, mu: &Weight) -> Result<VermaIso<S>> {
    check_vanishing(amb, &levi_roots(amb))?;
    let datum = &amb.datum;
    let (w, _) = connecting_element(datum, &amb.levi, Group::WIp, mu, lambda).ok_or(Error::NotInOrbit)?;
    let source = induction::baby_verma(amb, lambda);
    let mut map = Morphism::identity(&source.module);
    let mut cur = *lambda;
    let mut cur_mod = source.module.clone();
    for &i in w.word.iter().rev() {
        let next = dot_reflect(datum, i, &cur);
        let (src, tgt, r) = reflection_map(amb, &cur, i)?;
        if tgt.module != cur_mod {
            return Err(Error::InvalidInput("reflection target differs from the current module".into()));
        }
        let inv = r.inverse(&src.module, &tgt.module).ok_or(Error::LeviVanishingViolated)?;
        map = map.then(&inv, &source.module, &tgt.module, &src.module);
        cur = next;
        cur_mod = src.module;
    }
    let target = induction::baby_verma(amb, mu);
    if target.module != cur_mod {
        return Err(Error::NotInOrbit);
    }
    Ok(VermaIso { source, target, map, steps: w.word.iter().rev().copied().collect() })
}

/// `Theta_A`: reinterprets a module over `A` with `pi = 0` as one over `A`
/// with the structure map `pi`; requires `pi(h_alpha) = 0` on `roots`.
fn theta_on<S: Scalar>(m: &GradedModule<S>, pi: Vec<Vec<S>>, roots: &[usize]) -> Result<GradedModule<S>> {
    let base = m.base().with_pi(pi);
    if !base.check_levi_vanishing(m.datum(), roots) {
        return Err(Error::LeviVanishingViolated);
    }
    let amb = m.ambient().with_base(Arc::new(base))?;
    Ok(m.reambient(amb))
}

/// `Theta_A` on `U_chi`-objects.
pub fn theta<S: Scalar>(m: &GradedModule<S>, pi: Vec<Vec<S>>) -> Result<GradedModule<S>> {
    let roots: Vec<usize> = (0..m.datum().num_roots()).collect();
    theta_on(m, pi, &roots)
}

/// `Theta_A^I` on `U^I`-objects.
pub fn theta_levi<S: Scalar>(m: &GradedModule<S>, pi: Vec<Vec<S>>) -> Result<GradedModule<S>> {
    let roots = levi_roots(m.ambient());
    theta_on(m, pi, &roots)
}

/// Inverse of [`theta`] and [`theta_levi`]: forgets `pi`.
pub fn theta_inverse<S: Scalar>(m: &GradedModule<S>) -> Result<GradedModule<S>> {
    let zero = vec![vec![S::zero(); m.base().dim()]; m.base().rank()];
    let roots = if m.ambient().spec == SubalgebraSpec::Full {
        (0..m.datum().num_roots()).collect()
    } else {
        levi_roots(m.ambient())
    };
    check_vanishing(m.ambient(), &roots)?;
    let amb = m.ambient().with_base(Arc::new(m.base().with_pi(zero)))?;
    Ok(m.reambient(amb))
}

/// `L_{F,chi}(lambda) = Z / rad Z`.
pub fn simple_head<S: Scalar>(amb: &Ambient<S>, lambda: &Weight) -> Result<GradedModule<S>> {
    let z = induction::baby_verma(amb, lambda);
    let (g, v) = generator(&z);
    Ok(z.module.radical_and_head(g, &v)?.head)
}

/// `L_{F,I,chi}(lambda)`, the head of the Levi baby Verma module.
pub fn levi_simple_head<S: Scalar>(amb: &Ambient<S>, lambda: &Weight) -> Result<GradedModule<S>> {
    let z = induction::levi_baby_verma(amb, lambda);
    let (g, v) = generator(&z);
    Ok(z.module.radical_and_head(g, &v)?.head)
}

/// `A` with `pi = 0` and the prime field with `pi = 0`, with the map between them.
fn zero_pi_change<S: Scalar>(amb: &Ambient<S>) -> Result<BaseChange<S>> {
    let zero = vec![vec![S::zero(); amb.base.dim()]; amb.base.rank()];
    BaseChange::from_prime_field(Arc::new(amb.base.with_pi(zero)))
}

/// `Q_{A,I,chi}(lambda)`: the summand of the Levi induction of the prime
/// field object `F^lambda` with head `L_{F,I,chi}(lambda)`, carried to `A`
/// by base change and `Theta_A^I`.
pub fn projective_cover_levi<S: Scalar>(amb: &Ambient<S>, lambda: &Weight, seed: u64) -> Result<GradedModule<S>> {
    check_vanishing(amb, &levi_roots(amb))?;
    let bc = zero_pi_change(amb)?;
    let amb0 = amb.with_base(bc.source.clone())?.with_spec(SubalgebraSpec::Levi);
    let head = levi_simple_head(&amb0, lambda)?;
    let phi = induction::induce(&induction::lambda_object(&amb0, lambda), SubalgebraSpec::Levi)?;
    let mut found = None;
    for part in phi.module.fitting_split(seed)? {
        if crate::gradedmod::hom_space(&part.module, &head)?.dim() > 0 {
            found = Some(part.module);
            break;
        }
    }
    let q0 = found.ok_or(Error::NotUniqueMax)?;
    if bc.target.dim() == 1 && amb.base.pi.iter().all(|v| v[0].is_zero()) {
        return Ok(q0.reambient(amb.with_spec(SubalgebraSpec::Levi)));
    }
    let qa = q0.base_change(&bc)?;
    theta_levi(&qa, amb.base.pi.clone())
}

/// `Q^I_{A,chi}(lambda) = Gamma(Q_{A,I,chi}(lambda))`.
pub fn q_upper_i<S: Scalar>(amb: &Ambient<S>, lambda: &Weight, seed: u64) -> Result<GradedModule<S>> {
    let q = projective_cover_levi(amb, lambda, seed)?;
    Ok(induction::gamma(&q.inflate_spec(SubalgebraSpec::LeviPlus)?)?.module)
}

/// `Xi^I_{A,chi}(lambda) = Phi^I(Q_{A,I,chi}(lambda))`.
pub fn xi_i<S: Scalar>(amb: &Ambient<S>, lambda: &Weight, seed: u64) -> Result<GradedModule<S>> {
    let q = projective_cover_levi(amb, lambda, seed)?;
    Ok(induction::phi_i(&q)?.module)
}

/// The submodule spun by all grades whose `ZI`-coset is not below `nu`.
pub fn truncation_kernel<S: Scalar>(m: &GradedModule<S>, nu: &Weight) -> Submodule<S> {
    let amb = m.ambient();
    let vecs: Vec<(usize, Vec<S>)> = (0..m.num_grades())
        .filter(|&g| !leq_coset(&amb.datum, &amb.levi, &m.keys()[g], nu))
        .flat_map(|g| (0..m.dims()[g]).map(move |j| (g, crate::linalg::unit_vec(m.dims()[g], j))))
        .collect();
    m.spin(&vecs)
}

/// `T^{nu+ZI} M` with the quotient map.
pub fn truncate<S: Scalar>(m: &GradedModule<S>, nu: &Weight) -> (GradedModule<S>, Morphism<S>) {
    m.quotient(&truncation_kernel(m, nu))
}

/// The truncation bound `lambda + 2(p-1) rho` used for projective covers.
pub fn cover_bound<S: Scalar>(amb: &Ambient<S>, lambda: &Weight) -> Weight {
    let two_rho = (0..amb.datum.num_pos()).fold(Weight::zero(amb.datum.d), |acc, r| acc + amb.datum.root(r));
    *lambda + (amb.datum.p as i32 - 1) * two_rho
}

/// `Q_{A,chi}(lambda)`: the summand of the truncated `Xi^I(lambda)` whose
/// reduction to the residue field has head `L_{F,chi}(lambda)`.
pub fn projective_cover<S: Scalar>(amb: &Ambient<S>, lambda: &Weight, seed: u64) -> Result<GradedModule<S>> {
    projective_cover_at(amb, lambda, &cover_bound(amb, lambda), seed)
}

/// [`projective_cover`] with an explicit truncation bound.
pub fn projective_cover_at<S: Scalar>(amb: &Ambient<S>, lambda: &Weight, nu: &Weight, seed: u64) -> Result<GradedModule<S>> {
    let xi = xi_i(amb, lambda, seed)?;
    let (t, _) = truncate(&xi, nu);
    let res = BaseChange::residue(amb.base.clone());
    let amb_f = amb.with_base(res.target.clone())?;
    let head = simple_head(&amb_f, lambda)?;
    for part in t.fitting_split(seed)? {
        let reduced = part.module.base_change(&res)?;
        if crate::gradedmod::hom_space(&reduced, &head)?.dim() > 0 {
            return Ok(part.module);
        }
    }
    Err(Error::NotUniqueMax)
}

#[cfg(test)]
mod tests;
