//! Verification suites: each checks one structural statement on the weights
//! of a window and reports per-case results.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::Derived;
use crate::duality::{biduality, check_antiequivalence, dual_d};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::gradedmod::{Ambient, BaseChange, GradedModule, SubalgebraSpec};
use crate::induction::{self, frobenius_check, lambda_object};
use crate::lattice::Weight;
use crate::rootdata::tau;
use crate::structure::{
    self, multiplicities, projective_cover, projective_cover_levi, q_filtration, q_upper_i, simple_head, theta,
    theta_inverse, verify_blocks, verify_iso_criterion, xi_i, z_filtration, MultKind,
};
use crate::weyl::{dot_orbit_size_mod_p, fundamental_representative, leq_coset, lt_coset, Group, Window};

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 13] = [
    "conditions",
    "frobenius",
    "iso-criterion",
    "theta",
    "irreducible-regular",
    "levi-dim-formula",
    "zfilt",
    "qfilt",
    "ext-vanishing",
    "duality",
    "reciprocity",
    "blocks",
    "base-change",
];

/// Outcome of one case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub key: String,
    pub passed: bool,
    pub detail: String,
}

/// Cases sorted by key, with named counters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub counters: BTreeMap<String, u64>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), cases: Vec::new(), counters: BTreeMap::new() }
    }

    pub fn case(&mut self, key: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.cases.push(Case { key: key.into(), passed, detail: detail.into() });
    }

    pub fn count(&mut self, name: &str, n: u64) {
        *self.counters.entry(name.to_string()).or_insert(0) += n;
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.passed)
    }

    fn finish(mut self) -> Self {
        self.cases.sort_by(|a, b| a.key.cmp(&b.key));
        self.count("cases", self.cases.len() as u64);
        let failed = self.failures().count() as u64;
        self.count("failed", failed);
        self
    }
}

/// Knobs shared by the suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// random instances per functor pair or per check
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: structure::DEFAULT_SEED, samples: 50 }
    }
}

/// Runs the named suite over `amb` and the weights of `window`.
pub fn run_suite<S: Scalar>(name: &str, amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let r = match name {
        "conditions" => conditions(amb, window, opts),
        "frobenius" => frobenius(amb, window, opts),
        "iso-criterion" => iso_criterion(amb, window, opts),
        "theta" => theta_suite(amb, window),
        "irreducible-regular" => irreducible_regular(amb, window),
        "levi-dim-formula" => levi_dim_formula(amb, window, opts),
        "zfilt" => zfilt(amb, window, opts),
        "qfilt" => qfilt(amb, window, opts),
        "ext-vanishing" => ext_vanishing(amb, window, opts),
        "duality" => duality(amb, window, opts),
        "reciprocity" => reciprocity(amb, window, opts),
        "blocks" => blocks(amb, window),
        "base-change" => base_change(amb, window, opts),
        _ => return Err(Error::InvalidInput(format!("unknown suite {name}"))),
    }?;
    Ok(r.finish())
}

fn rng_for(opts: &SuiteOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn pick(pts: &[Weight], rng: &mut ChaCha8Rng) -> Weight {
    *pts.choose(rng).expect("empty window")
}

fn orbit_rep<S: Scalar>(amb: &Ambient<S>, w: &Weight) -> Weight {
    fundamental_representative(&amb.datum, &amb.levi, Group::WIp, w)
}

/// Window points with one point per `W_{I,p}`-orbit.
fn orbit_points<S: Scalar>(amb: &Ambient<S>, window: &Window) -> Vec<Weight> {
    let mut seen = std::collections::BTreeSet::new();
    window.points().into_iter().filter(|w| seen.insert(orbit_rep(amb, w))).collect()
}

fn random_vector<S: Scalar>(m: &GradedModule<S>, rng: &mut ChaCha8Rng) -> (usize, Vec<S>) {
    let g = rng.gen_range(0..m.num_grades());
    let v = (0..m.dims()[g]).map(|_| S::from_i64(rng.gen_range(0..S::CHAR as i64))).collect();
    (g, v)
}

/// Defining conditions hold for baby Verma modules, simple heads and random
/// submodules and quotients.
fn conditions<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("conditions");
    let mut rng = rng_for(opts, 1);
    let pts = window.points();
    for i in 0..opts.samples {
        let lam = pick(&pts, &mut rng);
        let z = induction::baby_verma(amb, &lam).module;
        let (kind, m) = match i % 5 {
            0 => ("Z", z),
            1 => ("ZI", induction::levi_baby_verma(amb, &lam).module),
            2 if amb.base.is_prime_field() => ("L", simple_head(amb, &lam)?),
            2 | 3 => {
                let sub = z.spin(&[random_vector(&z, &mut rng)]);
                ("sub", z.sub_module(&sub).0)
            }
            _ => {
                let sub = z.spin(&[random_vector(&z, &mut rng)]);
                ("quot", z.quotient(&sub).0)
            }
        };
        let v = m.validate();
        rep.case(format!("{i:03} {kind}({lam})"), v.is_empty(), format!("{} violations, dim {}", v.len(), m.dim()));
    }
    Ok(rep)
}

/// Frobenius reciprocity for induction to `U` from `U^0`, `U^0U^+`, `U^IU^+`
/// and `U^I`.
fn frobenius<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("frobenius");
    let mut rng = rng_for(opts, 2);
    let pts = window.points();
    let pairs = [SubalgebraSpec::Torus, SubalgebraSpec::Borel, SubalgebraSpec::LeviPlus, SubalgebraSpec::Levi];
    for from in pairs {
        for i in 0..opts.samples {
            let (lam, mu) = (pick(&pts, &mut rng), pick(&pts, &mut rng));
            let m = match from {
                SubalgebraSpec::Torus => lambda_object(amb, &lam),
                SubalgebraSpec::Borel => lambda_object(amb, &lam).inflate_spec(SubalgebraSpec::Borel)?,
                SubalgebraSpec::LeviPlus => {
                    induction::levi_baby_verma(amb, &lam).module.inflate_spec(SubalgebraSpec::LeviPlus)?
                }
                _ => induction::levi_baby_verma(amb, &lam).module,
            };
            let z = induction::baby_verma(amb, &mu).module;
            let n = if i % 2 == 0 || !amb.base.is_prime_field() {
                z
            } else {
                let sub = z.spin(&[random_vector(&z, &mut rng)]);
                z.quotient(&sub).0
            };
            let c = frobenius_check(&m, SubalgebraSpec::Full, &n)?;
            rep.count("nonzero", (c.induced_side > 0) as u64);
            rep.case(
                format!("{}->U {i:03} ({lam}, {mu})", from.name()),
                c.holds(),
                format!("{} vs {}", c.induced_side, c.restricted_side),
            );
        }
    }
    Ok(rep)
}

/// Baby Verma isomorphism agrees with `W_{I,p}`-dot-orbit membership.
fn iso_criterion<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("iso-criterion");
    let r = verify_iso_criterion(amb, window, opts.seed)?;
    rep.count("weights", r.weights as u64);
    rep.count("pairs", r.pairs as u64);
    rep.count("classes", r.classes as u64);
    rep.case("all pairs", r.passed(), format!("{} mismatches", r.mismatches.len()));
    for (a, b) in &r.mismatches {
        rep.case(format!("pair ({a}, {b})"), false, "isomorphism and orbit membership disagree");
    }
    Ok(rep)
}

/// `Theta` carries baby Verma modules over `pi = 0` to those over `pi`, and back.
fn theta_suite<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("theta");
    let zero = vec![vec![S::zero(); amb.base.dim()]; amb.base.rank()];
    let amb0 = amb.with_base(Arc::new(amb.base.with_pi(zero)))?;
    for lam in window.points() {
        let z0 = induction::baby_verma(&amb0, &lam).module;
        let z = induction::baby_verma(amb, &lam).module;
        let t = theta(&z0, amb.base.pi.clone())?;
        let ok = t == z && theta_inverse(&t)? == z0 && t.is_valid();
        rep.case(format!("Z({lam})"), ok, "");
    }
    Ok(rep)
}

/// For regular nilpotent `chi`, every homogeneous basis vector generates `Z(lambda)`.
fn irreducible_regular<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window) -> Result<SuiteReport> {
    if amb.levi.simple.len() != amb.datum.n {
        return Err(Error::InvalidInput("irreducible-regular needs I to be all simple roots".into()));
    }
    let mut rep = SuiteReport::new("irreducible-regular");
    for lam in window.points() {
        let z = induction::baby_verma(amb, &lam).module;
        let mut bad = 0;
        for g in 0..z.num_grades() {
            for j in 0..z.dims()[g] {
                if !z.spin(&[(g, crate::linalg::unit_vec(z.dims()[g], j))]).is_full() {
                    bad += 1;
                }
            }
        }
        rep.case(format!("Z({lam})"), bad == 0, format!("{bad} non-generating vectors"));
    }
    Ok(rep)
}

/// `rank Q_{A,I,chi}(lambda) = p^{|R_I^+|} |W_I . d lambda|`.
fn levi_dim_formula<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("levi-dim-formula");
    let p = amb.datum.p as usize;
    let pos_i = amb.levi.pos_roots(&amb.datum).len() as u32;
    for lam in window.points() {
        let q = projective_cover_levi(amb, &lam, opts.seed)?;
        let want = p.pow(pos_i) * dot_orbit_size_mod_p(&amb.datum, &amb.levi.simple, &lam);
        let got = q.rank_over_base();
        rep.case(format!("Q_I({lam})"), got == Some(want), format!("rank {got:?}, formula {want}"));
    }
    Ok(rep)
}

/// `Q^I(lambda)` has `|W_I . d lambda|` Z-sections, each isomorphic to `Z(lambda)`.
fn zfilt<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("zfilt");
    for lam in orbit_points(amb, window) {
        let q = q_upper_i(amb, &lam, opts.seed)?;
        let f = z_filtration(&q, opts.seed)?;
        let want = dot_orbit_size_mod_p(&amb.datum, &amb.levi.simple, &lam);
        let z = induction::baby_verma(amb, &lam).module;
        let mut iso = 0;
        for s in &f.sections {
            if s.is_isomorphic(&z, opts.seed)?.is_some() {
                iso += 1;
            }
        }
        let ok = f.verify(&q) && f.len() == want && iso == want;
        rep.case(format!("Q^I({lam})"), ok, format!("{} sections, {iso} isomorphic to Z, expected {want}", f.len()));
    }
    Ok(rep)
}

/// `Xi^I(lambda)` has a Q-filtration with `Q^I(lambda)` exactly once, on top,
/// and a seed-independent multiset of labels.
fn qfilt<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("qfilt");
    for lam in orbit_points(amb, window) {
        let top = orbit_rep(amb, &lam);
        let xi = xi_i(amb, &lam, opts.seed)?;
        let mut multisets = Vec::new();
        let mut ok = true;
        for s in 0..2 {
            let f = q_filtration(&xi, opts.seed + s)?;
            ok &= f.verify(&xi);
            ok &= f.labels.last() == Some(&top);
            ok &= f.labels.iter().filter(|l| **l == top).count() == 1;
            ok &= f.labels[..f.len() - 1].iter().all(|l| lt_coset(&amb.datum, &amb.levi, &top, l));
            let mut ls = f.labels.clone();
            ls.sort();
            multisets.push(ls);
        }
        ok &= multisets[0] == multisets[1];
        rep.case(format!("Xi^I({lam})"), ok, format!("{} sections", multisets[0].len()));
    }
    Ok(rep)
}

/// Ext vanishing forced by the coset order, plus a count of nonzero groups.
fn ext_vanishing<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("ext-vanishing");
    let (datum, levi) = (&amb.datum, &amb.levi);
    let pts = window.points();
    let zs: BTreeMap<Weight, GradedModule<S>> =
        pts.iter().map(|w| (*w, induction::baby_verma(amb, w).module)).collect();
    for lam in &pts {
        for mu in &pts {
            let n = &zs[mu];
            let forced = !n.keys().iter().any(|k| leq_coset(datum, levi, lam, k));
            let e = zs[lam].ext1(n)?.dim;
            rep.count("pairs", 1);
            rep.count("nonzero", (e > 0) as u64);
            if forced {
                rep.case(format!("Ext(Z({lam}), Z({mu}))"), e == 0, format!("dim {e}"));
            }
        }
    }
    let mut rng = rng_for(opts, 7);
    for lam in orbit_points(amb, window) {
        let q = q_upper_i(amb, &lam, opts.seed)?;
        for i in 0..opts.samples.min(pts.len()) {
            let mu = pick(&pts, &mut rng);
            let z = &zs[&mu];
            let n = if i % 2 == 0 {
                z.clone()
            } else {
                let sub = z.spin(&[random_vector(z, &mut rng)]);
                z.quotient(&sub).0
            };
            if n.is_zero() || n.keys().iter().any(|k| lt_coset(datum, levi, &lam, k)) {
                continue;
            }
            let e = q.ext1(&n)?.dim;
            rep.case(format!("Ext(Q^I({lam}), N{i:03}({mu}))"), e == 0, format!("dim {e}"));
        }
    }
    Ok(rep)
}

/// The ambient `C_{DA}`: same `chi`, base with the derived map `D`.
pub fn d_ambient<S: Scalar>(amb: &Ambient<S>) -> Result<Arc<Ambient<S>>> {
    let t = tau(&amb.datum, &amb.levi)?;
    amb.with_base(Arc::new(amb.base.derived(Derived::D, Some(&t))?))
}

/// `D-bar D = id` on free modules and `D(L(lambda)) = L_{DA}(lambda)`.
fn duality<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("duality");
    let da = d_ambient(amb)?;
    let mut samples = Vec::new();
    for lam in window.points() {
        let z = induction::baby_verma(amb, &lam).module;
        let ok = biduality(&z).map(|(dd, f)| dd == z && f.is_iso(&z, &dd)).unwrap_or(false);
        rep.case(format!("biduality Z({lam})"), ok, "");
        if amb.base.is_prime_field() {
            let l = simple_head(amb, &lam)?;
            let dl = dual_d(&l)?;
            let ok = dl.is_isomorphic(&simple_head(&da, &lam)?, opts.seed)?.is_some();
            rep.case(format!("D(L({lam}))"), ok, format!("dim {}", l.dim()));
            if samples.len() < 8 {
                samples.push(z);
                samples.push(l);
            }
        }
    }
    if !samples.is_empty() {
        let r = check_antiequivalence(&samples, opts.seed)?;
        rep.count("hom_pairs", r.pairs as u64);
        rep.count("compositions", r.compositions as u64);
        rep.case("anti-equivalence", r.passed(), format!("{r:?}"));
    }
    Ok(rep)
}

/// `(Q(lambda) : Q^I(mu)) = [Z_{DF}(mu) : L_{DF}(lambda)]` entrywise.
fn reciprocity<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("reciprocity");
    let qqi = multiplicities(amb, MultKind::QQI, window, opts.seed)?;
    let zl = multiplicities(&*d_ambient(amb)?, MultKind::ZL, window, opts.seed)?;
    for l in &qqi.reps {
        for m in &qqi.reps {
            let (a, b) = (qqi.get(l, m), zl.get(l, m));
            rep.case(format!("({l}, {m})"), a == b, format!("{a} vs {b}"));
        }
        rep.case(format!("diagonal {l}"), qqi.get(l, l) == 1, "");
    }
    Ok(rep)
}

/// Linkage components agree over `A` and over its residue field.
fn blocks<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("blocks");
    let r = verify_blocks(amb, window)?;
    rep.count("components", r.over_base.len() as u64);
    rep.count("ext_nonzero_field", r.ext_field.iter().filter(|&&e| e > 0).count() as u64);
    rep.count("ext_nonzero_base", r.ext_base.iter().filter(|&&e| e > 0).count() as u64);
    rep.case("components", r.passed(), format!("{} over F, {} over A", r.over_field.len(), r.over_base.len()));
    Ok(rep)
}

/// `Q_A(lambda)` is free, reduces to `Q_F(lambda)` and has no `Ext^1` against
/// random targets.
fn base_change<S: Scalar>(amb: &Arc<Ambient<S>>, window: &Window, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("base-change");
    let res = BaseChange::residue(amb.base.clone());
    let amb_f = amb.with_base(res.target.clone())?;
    let pts = window.points();
    let mut rng = rng_for(opts, 13);
    for lam in orbit_points(amb, window) {
        let q = projective_cover(amb, &lam, opts.seed)?;
        let qf = projective_cover(&amb_f, &lam, opts.seed)?;
        let red = q.base_change(&res)?;
        rep.case(format!("free Q({lam})"), q.is_free(), format!("rank {:?}", q.rank_over_base()));
        rep.case(format!("reduce Q({lam})"), red.is_isomorphic(&qf, opts.seed)?.is_some(), "");
        let z = induction::baby_verma(amb, &lam).module;
        let zf = induction::baby_verma(&amb_f, &lam).module;
        rep.case(format!("reduce Z({lam})"), z.base_change(&res)? == zf, "");
        let mut worst = 0;
        for _ in 0..opts.samples.min(20) {
            let z = induction::baby_verma(amb, &pick(&pts, &mut rng)).module;
            let n = if rng.gen_bool(0.5) {
                z
            } else {
                let sub = z.spin(&[random_vector(&z, &mut rng)]);
                z.quotient(&sub).0
            };
            worst = worst.max(q.ext1(&n)?.dim);
        }
        rep.case(format!("projective Q({lam})"), worst == 0, format!("max Ext^1 dim {worst}"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use num_traits::{One, Zero};

    use super::*;
    use crate::coeff::BaseAlgebra;
    use crate::field::F3;
    use crate::rootdata::{build_gl, LeviSpec};

    fn amb(levi: Vec<usize>, base: BaseAlgebra<F3>) -> Arc<Ambient<F3>> {
        let datum = Arc::new(build_gl(2, 3).unwrap());
        let levi = LeviSpec::new(&datum, levi).unwrap();
        Ambient::standard(datum, levi, Arc::new(base), SubalgebraSpec::Full).unwrap()
    }

    fn opts() -> SuiteOptions {
        SuiteOptions { seed: 3, samples: 6 }
    }

    #[test]
    fn every_suite_passes_on_gl2() {
        let field = amb(vec![0], BaseAlgebra::zero_field(2));
        let e = (F3::zero(), F3::one());
        let dual = amb(vec![0], BaseAlgebra::dual_numbers(vec![e, e]));
        let win = Window::new(2, -1, 1);
        for name in SUITES {
            let a = if matches!(name, "theta" | "blocks" | "base-change") { &dual } else { &field };
            let r = run_suite(name, a, &win, &opts()).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
            assert!(!r.cases.is_empty(), "{name}");
            assert!(r.cases.windows(2).all(|w| w[0].key <= w[1].key));
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = amb(vec![], BaseAlgebra::zero_field(2));
        let win = Window::new(2, 0, 1);
        for name in ["conditions", "frobenius", "ext-vanishing"] {
            assert_eq!(run_suite(name, &a, &win, &opts()).unwrap(), run_suite(name, &a, &win, &opts()).unwrap());
        }
    }

    #[test]
    fn nonzero_ext_is_witnessed_for_zero_chi() {
        let a = amb(vec![], BaseAlgebra::zero_field(2));
        let r = run_suite("ext-vanishing", &a, &Window::new(2, -1, 1), &opts()).unwrap();
        assert!(r.passed());
        assert!(r.counters["nonzero"] > 0);
    }

    #[test]
    fn unknown_suite_and_wrong_levi_are_errors() {
        let a = amb(vec![], BaseAlgebra::zero_field(2));
        let win = Window::new(2, 0, 0);
        assert!(run_suite("nope", &a, &win, &opts()).is_err());
        assert!(run_suite("irreducible-regular", &a, &win, &opts()).is_err());
    }
}
