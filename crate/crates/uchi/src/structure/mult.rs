//! Multiplicity tables, the isomorphism criterion sweep and block comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{projective_cover, z_filtration};
use crate::error::Result;
use crate::field::Scalar;
use crate::gradedmod::{hom_space, Ambient, GradedModule, SubalgebraSpec};
use crate::induction;
use crate::lattice::Weight;
use crate::weyl::{fundamental_representative, same_orbit, Group, Window};

/// Which multiplicity is tabulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MultKind {
    /// `[Z(mu) : L(lambda)]`
    ZL,
    /// `(Q(lambda) : Z(mu))`
    QZ,
    /// `(Q(lambda) : Q^I(mu))`
    QQI,
}

impl MultKind {
    pub fn name(self) -> &'static str {
        match self {
            MultKind::ZL => "Z:L",
            MultKind::QZ => "Q:Z",
            MultKind::QQI => "Q:QI",
        }
    }
}

/// Entries indexed by `(lambda, mu)` orbit representatives; zero entries
/// are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityTable {
    pub kind: MultKind,
    pub reps: Vec<Weight>,
    #[serde(with = "pairs")]
    pub entries: BTreeMap<(Weight, Weight), usize>,
}

mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::lattice::Weight;

    type Map = BTreeMap<(Weight, Weight), usize>;

    pub fn serialize<S: Serializer>(m: &Map, s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|(&(l, u), &v)| (l, u, v)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Map, D::Error> {
        let v: Vec<(Weight, Weight, usize)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(l, u, c)| ((l, u), c)).collect())
    }
}

impl MultiplicityTable {
    pub fn get(&self, lambda: &Weight, mu: &Weight) -> usize {
        self.entries.get(&(*lambda, *mu)).copied().unwrap_or(0)
    }

    /// `lambda,mu,value` rows over all representative pairs.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda,mu,value\n");
        for l in &self.reps {
            for m in &self.reps {
                let _ = writeln!(s, "\"{}\",\"{}\",{}", l, m, self.get(l, m));
            }
        }
        s
    }
}

/// Window points reduced to `W_{I,p}`-orbit representatives.
pub fn representatives<S: Scalar>(amb: &Ambient<S>, window: &Window) -> Vec<Weight> {
    let set: BTreeSet<Weight> =
        window.points().iter().map(|w| fundamental_representative(&amb.datum, &amb.levi, Group::WIp, w)).collect();
    set.into_iter().collect()
}

/// The representative `lambda` with `L(lambda)` isomorphic to the simple `s`.
fn identify_simple<S: Scalar>(amb: &Ambient<S>, s: &GradedModule<S>) -> Result<Option<Weight>> {
    for k in s.keys() {
        let z = induction::baby_verma(amb, k);
        if hom_space(&z.module, s)?.dim() > 0 {
            return Ok(Some(fundamental_representative(&amb.datum, &amb.levi, Group::WIp, k)));
        }
    }
    Ok(None)
}

/// `[M : L(lambda)]` for all `lambda`, from a composition series.
pub fn composition_factors<S: Scalar>(amb: &Ambient<S>, m: &GradedModule<S>, seed: u64) -> Result<BTreeMap<Weight, usize>> {
    let f = m.composition_series(seed)?;
    let mut out = BTreeMap::new();
    for s in &f.sections {
        let l = identify_simple(amb, s)?.ok_or(crate::error::Error::NotUniqueMax)?;
        *out.entry(l).or_insert(0) += 1;
    }
    Ok(out)
}

/// Tabulates one multiplicity over the representatives of `window`.
pub fn multiplicities<S: Scalar>(amb: &Ambient<S>, kind: MultKind, window: &Window, seed: u64) -> Result<MultiplicityTable> {
    let reps = representatives(amb, window);
    let rep_set: BTreeSet<Weight> = reps.iter().copied().collect();
    let mut entries = BTreeMap::new();
    let mut put = |l: Weight, m: Weight, v: usize| {
        if v > 0 && rep_set.contains(&l) && rep_set.contains(&m) {
            *entries.entry((l, m)).or_insert(0) += v;
        }
    };
    match kind {
        MultKind::ZL => {
            for mu in &reps {
                let z = induction::baby_verma(amb, mu);
                for (l, c) in composition_factors(amb, &z.module, seed)? {
                    put(l, *mu, c);
                }
            }
        }
        MultKind::QZ => {
            for l in &reps {
                let q = projective_cover(amb, l, seed)?;
                for mu in z_filtration(&q, seed)?.labels {
                    put(*l, fundamental_representative(&amb.datum, &amb.levi, Group::WIp, &mu), 1);
                }
            }
        }
        MultKind::QQI => {
            let minus = amb.with_spec(SubalgebraSpec::LeviMinus);
            for l in &reps {
                let q = projective_cover(amb, l, seed)?.restrict_spec(SubalgebraSpec::LeviMinus)?;
                for mu in &reps {
                    let z = induction::levi_baby_verma(amb, mu).module.inflate_spec(SubalgebraSpec::LeviMinus)?;
                    debug_assert_eq!(**z.ambient(), *minus);
                    put(*l, *mu, hom_space(&q, &z)?.dim());
                }
            }
        }
    }
    Ok(MultiplicityTable { kind, reps, entries })
}

/// Outcome of comparing baby Verma isomorphism with orbit membership.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub weights: usize,
    pub pairs: usize,
    pub classes: usize,
    pub mismatches: Vec<(Weight, Weight)>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Sorts the baby Verma modules on `window` into isomorphism classes and
/// compares the induced relation with `W_{I,p}`-dot orbits on every pair.
pub fn verify_iso_criterion<S: Scalar>(amb: &Ambient<S>, window: &Window, seed: u64) -> Result<IsoReport> {
    let pts = window.points();
    let mut reps: Vec<GradedModule<S>> = Vec::new();
    let mut class = Vec::with_capacity(pts.len());
    for w in &pts {
        let z = induction::baby_verma(amb, w).module;
        let mut found = None;
        for (c, r) in reps.iter().enumerate() {
            if r.keys() == z.keys() && r.dims() == z.dims() && z.is_isomorphic(r, seed)?.is_some() {
                found = Some(c);
                break;
            }
        }
        class.push(match found {
            Some(c) => c,
            None => {
                reps.push(z);
                reps.len() - 1
            }
        });
    }
    let mut report = IsoReport { weights: pts.len(), classes: reps.len(), ..Default::default() };
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            report.pairs += 1;
            let orbit = same_orbit(&amb.datum, &amb.levi, Group::WIp, &pts[i], &pts[j]);
            if orbit != (class[i] == class[j]) {
                report.mismatches.push((pts[i], pts[j]));
            }
        }
    }
    Ok(report)
}

/// Connected components of the linkage graph on `window`: edges join
/// weights whose baby Verma modules have a nonzero Hom or Ext^1.
pub fn block_components<S: Scalar>(amb: &Ambient<S>, window: &Window) -> Result<(Vec<BTreeSet<Weight>>, Vec<usize>)> {
    let pts = window.points();
    let zs: Vec<GradedModule<S>> = pts.iter().map(|w| induction::baby_verma(amb, w).module).collect();
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut ext_dims = Vec::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i == j {
                continue;
            }
            let ext = zs[i].ext1(&zs[j])?.dim;
            ext_dims.push(ext);
            if ext > 0 || hom_space(&zs[i], &zs[j])?.dim() > 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut comps: BTreeMap<usize, BTreeSet<Weight>> = BTreeMap::new();
    for (i, w) in pts.iter().enumerate() {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().insert(*w);
    }
    let mut out: Vec<BTreeSet<Weight>> = comps.into_values().collect();
    out.sort();
    Ok((out, ext_dims))
}

/// Linkage components over `A` and over its residue field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub over_field: Vec<BTreeSet<Weight>>,
    pub over_base: Vec<BTreeSet<Weight>>,
    pub ext_field: Vec<usize>,
    pub ext_base: Vec<usize>,
}

impl BlockReport {
    pub fn passed(&self) -> bool {
        self.over_field == self.over_base
    }
}

/// Compares the linkage components over `A` with those over `A/m`.
pub fn verify_blocks<S: Scalar>(amb: &Ambient<S>, window: &Window) -> Result<BlockReport> {
    let res = crate::gradedmod::BaseChange::residue(amb.base.clone());
    let amb_f = amb.with_base(res.target)?;
    let (over_field, ext_field) = block_components(&amb_f, window)?;
    let (over_base, ext_base) = block_components(amb, window)?;
    Ok(BlockReport { over_field, over_base, ext_field, ext_base })
}
