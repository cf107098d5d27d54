//! Z- and Q-filtrations by peeling maximal `ZI`-cosets.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{from_generator, levi_simple_head};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::gradedmod::{Filtration, GradedModule, SubalgebraSpec, Submodule};
use crate::induction::{self, highest_vectors};
use crate::lattice::Weight;
use crate::linalg::{is_zero_vec, unit_vec};
use crate::weyl::{fundamental_representative, leq_coset, lt_coset, Group};

/// Grades of `m` whose `ZI`-coset is maximal among the supported ones.
fn maximal_grades<S: Scalar>(m: &GradedModule<S>) -> Vec<usize> {
    let amb = m.ambient();
    let live: Vec<usize> = (0..m.num_grades()).filter(|&g| m.dims()[g] > 0).collect();
    live.iter()
        .copied()
        .filter(|&g| !live.iter().any(|&h| lt_coset(&amb.datum, &amb.levi, &m.keys()[g], &m.keys()[h])))
        .collect()
}

/// Incremental chain `0 = N_0 < N_1 < ...` in `m` with labelled sections.
struct Peeler<'a, S: Scalar> {
    m: &'a GradedModule<S>,
    chain: Vec<Submodule<S>>,
    labels: Vec<Weight>,
}

impl<'a, S: Scalar> Peeler<'a, S> {
    fn new(m: &'a GradedModule<S>) -> Self {
        Peeler { m, chain: vec![Submodule::zero(m)], labels: Vec::new() }
    }

    fn current(&self) -> (GradedModule<S>, crate::gradedmod::Morphism<S>) {
        self.m.quotient(self.chain.last().unwrap())
    }

    fn finish(self) -> Filtration<S> {
        let sections = self.chain.windows(2).map(|w| self.m.subquotient(&w[1], &w[0])).collect::<Vec<_>>();
        let witnesses = vec![None; sections.len()];
        Filtration { chain: self.chain, sections, labels: self.labels, witnesses }
    }
}

/// Candidate vectors of a subspace: basis vectors, then random combinations.
fn candidates<S: Scalar>(basis: &[Vec<S>], rng: &mut ChaCha8Rng, extra: usize) -> Vec<Vec<S>> {
    let mut out = basis.to_vec();
    if basis.len() > 1 {
        for _ in 0..extra {
            let mut v = vec![S::zero(); basis[0].len()];
            for b in basis {
                crate::linalg::axpy(&mut v, S::from_i64(rng.gen_range(0..S::CHAR as i64)), b);
            }
            if !is_zero_vec(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// A Z-filtration found by repeatedly embedding `Z(mu)` along a highest
/// vector of maximal `ZI`-coset; sections with coset not below `prefer` are
/// taken first when available.
fn z_filtration_impl<S: Scalar>(m: &GradedModule<S>, prefer: Option<&Weight>, seed: u64) -> Result<Filtration<S>> {
    let amb = m.ambient().clone();
    if amb.spec != SubalgebraSpec::Full {
        return Err(Error::NoKnownZFiltration(format!("module over {}", amb.spec.name())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut peel = Peeler::new(m);
    while !peel.chain.last().unwrap().is_full() {
        let (cur, proj) = peel.current();
        let mut grades = maximal_grades(&cur);
        if let Some(nu) = prefer {
            grades.sort_by_key(|&g| leq_coset(&amb.datum, &amb.levi, &cur.keys()[g], nu));
        }
        let hv = highest_vectors(&cur);
        let mut step = None;
        'grades: for g in grades {
            let basis: Vec<Vec<S>> = hv.iter().filter(|(h, _)| *h == g).map(|(_, v)| v.clone()).collect();
            if basis.is_empty() {
                continue;
            }
            let mu = cur.keys()[g];
            let z = induction::baby_verma(&amb, &mu);
            for v in candidates(&basis, &mut rng, 16) {
                if let Some(f) = from_generator(&z, &cur, g, &v)? {
                    if f.rank() == z.module.dim() {
                        step = Some((mu, z.module.image_of(&f, &cur, &Submodule::full(&z.module))));
                        break 'grades;
                    }
                }
            }
        }
        let (mu, img) = step.ok_or_else(|| Error::NoKnownZFiltration("no embedded baby Verma at a maximal coset".into()))?;
        let next = m.preimage(&proj, &cur, &img);
        peel.chain.push(next);
        peel.labels.push(mu);
    }
    Ok(peel.finish())
}

/// Z-filtration with sections `Z(label_i)`, listed from the bottom.
pub fn z_filtration<S: Scalar>(m: &GradedModule<S>, seed: u64) -> Result<Filtration<S>> {
    z_filtration_impl(m, None, seed)
}

/// Z-filtration putting sections with `ZI`-coset not below `lambda` first.
pub fn sort_z_filtration<S: Scalar>(m: &GradedModule<S>, lambda: &Weight, seed: u64) -> Result<Filtration<S>> {
    z_filtration_impl(m, Some(lambda), seed)
}

/// Whether the labels split as `not <= lambda` followed by `<= lambda`.
pub fn z_order_holds<S: Scalar>(f: &Filtration<S>, m: &GradedModule<S>, lambda: &Weight) -> bool {
    let amb = m.ambient();
    let below: Vec<bool> = f.labels.iter().map(|mu| leq_coset(&amb.datum, &amb.levi, mu, lambda)).collect();
    below.windows(2).all(|w| w[0] <= w[1])
}

/// Q-filtration of a projective module with sections `Q^I(label_i)`, listed
/// from the bottom; labels are `W_{I,p}`-orbit representatives. The Levi
/// summand peeled at each step is chosen by `seed`.
pub fn q_filtration<S: Scalar>(m: &GradedModule<S>, seed: u64) -> Result<Filtration<S>> {
    let amb = m.ambient().clone();
    if amb.spec != SubalgebraSpec::Full {
        return Err(Error::NotProjective(format!("module over {}", amb.spec.name())));
    }
    let levi_amb = amb.with_spec(SubalgebraSpec::Levi);
    let factor = (amb.datum.p as usize).pow((amb.datum.num_pos() - amb.levi.pos_roots(&amb.datum).len()) as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut heads: HashMap<Weight, GradedModule<S>> = HashMap::new();
    let mut peel = Peeler::new(m);
    while !peel.chain.last().unwrap().is_full() {
        let (cur, proj) = peel.current();
        let mut grades = maximal_grades(&cur);
        grades.shuffle(&mut rng);
        let coset = amb.cosets().zi(&cur.keys()[grades[0]]).0;
        let layer_res = cur.restrict_spec(SubalgebraSpec::Levi)?;
        let mut layer = Submodule::zero(&layer_res);
        for g in 0..cur.num_grades() {
            if amb.cosets().zi(&cur.keys()[g]).0 == coset {
                for j in 0..cur.dims()[g] {
                    layer.spans[g].insert(unit_vec(cur.dims()[g], j));
                }
            }
        }
        let (t, incl) = layer_res.sub_module(&layer);
        let mut parts = t.fitting_split(rng.gen())?;
        parts.shuffle(&mut rng);
        let part = parts.swap_remove(0);
        let img_t = part.module.image_of(&part.incl, &t, &Submodule::full(&part.module));
        let img = t.image_of(&incl, &layer_res, &img_t);
        let sub = cur.spin(&img.vectors());
        if sub.dim() != part.module.dim() * factor {
            return Err(Error::NotProjective(format!("section of dimension {} instead of {}", sub.dim(), part.module.dim() * factor)));
        }
        let (head, _) = part.module.head();
        let mut label = None;
        for k in head.keys() {
            let l = match heads.get(k) {
                Some(l) => l.clone(),
                None => {
                    let l = levi_simple_head(&levi_amb, k)?;
                    heads.insert(*k, l.clone());
                    l
                }
            };
            if head.is_isomorphic(&l, seed)?.is_some() {
                label = Some(fundamental_representative(&amb.datum, &amb.levi, Group::WIp, k));
                break;
            }
        }
        let label = label.ok_or_else(|| Error::NotProjective("Levi summand head is not a Levi simple".into()))?;
        peel.chain.push(m.preimage(&proj, &cur, &sub));
        peel.labels.push(label);
    }
    Ok(peel.finish())
}
