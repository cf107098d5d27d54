//! Weyl groups, p-affine dot actions, coset arithmetic and the partial order
//! on `X/ZI`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Sublattice, Weight};
use crate::rootdata::{apply_int, reflection_matrix, ChevalleyDatum, LeviSpec};

/// Which reflection group acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    W,
    Wp,
    WI,
    WIp,
}

impl Group {
    fn affine(self) -> bool {
        matches!(self, Group::Wp | Group::WIp)
    }

    /// Simple reflections generating the finite part.
    fn simple(self, datum: &ChevalleyDatum, levi: &LeviSpec) -> Vec<usize> {
        match self {
            Group::W | Group::Wp => (0..datum.n).collect(),
            Group::WI | Group::WIp => levi.simple.clone(),
        }
    }
}

/// Generators `s_{alpha, mp}` and `t_{alpha, mp}` by root index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AffineGen {
    /// `lambda -> s_alpha(lambda) + m p alpha`
    Reflect { root: usize, m: i64 },
    /// `lambda -> lambda + m p alpha`
    Translate { root: usize, m: i64 },
}

/// A word in the generators, applied right to left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineWord(pub Vec<AffineGen>);

impl AffineWord {
    pub fn identity() -> Self {
        AffineWord(Vec::new())
    }

    /// Linear (undotted) action.
    pub fn apply(&self, datum: &ChevalleyDatum, lambda: &Weight) -> Weight {
        let p = datum.p as i32;
        let mut x = *lambda;
        for g in self.0.iter().rev() {
            x = match *g {
                AffineGen::Reflect { root, m } => datum.reflect(&x, root) + (m as i32 * p) * datum.root(root),
                AffineGen::Translate { root, m } => x + (m as i32 * p) * datum.root(root),
            };
        }
        x
    }
}

/// `w . lambda = w(lambda + rho) - rho`
pub fn dot_apply(datum: &ChevalleyDatum, word: &AffineWord, lambda: &Weight) -> Weight {
    word.apply(datum, &(*lambda + datum.rho())) - datum.rho()
}

/// Simple reflection dot action.
pub fn dot_reflect(datum: &ChevalleyDatum, i: usize, lambda: &Weight) -> Weight {
    datum.reflect(&(*lambda + datum.rho()), i) - datum.rho()
}

/// An element of a finite parabolic Weyl group with a reduced word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// simple reflection indices; the element is `s_{w[0]} ... s_{w[k-1]}`
    pub word: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn apply(&self, lambda: &Weight) -> Weight {
        apply_int(&self.matrix, lambda)
    }

    pub fn dot(&self, datum: &ChevalleyDatum, lambda: &Weight) -> Weight {
        self.apply(&(*lambda + datum.rho())) - datum.rho()
    }
}

/// All elements of the group generated by the given simple reflections, in
/// breadth-first (length) order.
pub fn parabolic_elements(datum: &ChevalleyDatum, simple: &[usize]) -> Vec<WeylElement> {
    let d = datum.d;
    let id: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    let gens: Vec<(usize, Vec<Vec<i64>>)> = simple.iter().map(|&i| (i, reflection_matrix(datum, i))).collect();
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![WeylElement { word: Vec::new(), matrix: id }];
    let mut k = 0;
    while k < out.len() {
        for (i, s) in &gens {
            let m = mul(&out[k].matrix, s);
            if seen.insert(m.clone()) {
                let mut word = out[k].word.clone();
                word.push(*i);
                out.push(WeylElement { word, matrix: m });
            }
        }
        k += 1;
    }
    out
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// Canonical representatives for `X/ZI` and `X/pZI`.
#[derive(Clone, Debug)]
pub struct Cosets {
    pub p: u32,
    pub d: usize,
    zi: Sublattice,
    pzi: Sublattice,
    levi_simple: Vec<Weight>,
}

/// A coset `lambda + ZI` stored by its canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetZI(pub Weight);

/// A coset `lambda + pZI` stored by its canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetPZI(pub Weight);

impl Cosets {
    pub fn new(datum: &ChevalleyDatum, levi: &LeviSpec) -> Self {
        let levi_simple: Vec<Weight> = levi.simple.iter().map(|&i| datum.simple(i)).collect();
        let zi = Sublattice::from_weights(datum.d, &levi_simple);
        let pzi = zi.scaled(datum.p as i64);
        Cosets { p: datum.p, d: datum.d, zi, pzi, levi_simple }
    }

    pub fn zi(&self, lambda: &Weight) -> CosetZI {
        CosetZI(self.zi.reduce(lambda))
    }

    pub fn pzi(&self, lambda: &Weight) -> CosetPZI {
        CosetPZI(self.pzi.reduce(lambda))
    }

    pub fn zi_lattice(&self) -> &Sublattice {
        &self.zi
    }

    pub fn pzi_lattice(&self) -> &Sublattice {
        &self.pzi
    }

    /// `(lambda + ZI, d lambda)` with `d lambda` as residues on the toral basis.
    pub fn split(&self, c: &CosetPZI) -> (CosetZI, Vec<u32>) {
        let dl = c.0.mod_p(self.p).coords().iter().map(|&x| x as u32).collect();
        (self.zi(&c.0), dl)
    }

    /// Inverse of [`Cosets::split`]; `None` when no weight has that data.
    pub fn join(&self, c: &CosetZI, dl: &[u32]) -> Option<CosetPZI> {
        // find gamma in ZI with rep + gamma = dl mod p
        let p = self.p as i64;
        let k = self.levi_simple.len();
        let target: Vec<i64> = (0..self.d).map(|i| (dl[i] as i64 - c.0.coords()[i] as i64).rem_euclid(p)).collect();
        let a: Vec<Vec<i64>> = (0..self.d).map(|i| (0..k).map(|j| self.levi_simple[j].coords()[i] as i64).collect()).collect();
        let x = solve_mod_p(&a, &target, p)?;
        let mut w = c.0;
        for (j, &xj) in x.iter().enumerate() {
            w += (xj as i32) * self.levi_simple[j];
        }
        Some(self.pzi(&w))
    }
}

/// One solution of `a x = b` over `F_p`.
pub(crate) fn solve_mod_p(a: &[Vec<i64>], b: &[i64], p: i64) -> Option<Vec<i64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<i64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row: Vec<i64> = r.iter().map(|x| x.rem_euclid(p)).collect();
            row.push(bi.rem_euclid(p));
            row
        })
        .collect();
    let inv = |x: i64| -> i64 {
        let mut r = 1i64;
        let mut base = x.rem_euclid(p);
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let iv = inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..=cols {
                    m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| m[i][cols] != 0) {
        return None;
    }
    let mut x = vec![0i64; cols];
    for (k, &c) in pivots.iter().enumerate() {
        x[c] = m[k][cols];
    }
    Some(x)
}

/// `a <= b` in `X/ZI`: `b - a` is a nonnegative combination of simple roots
/// modulo `ZI`. Decided exactly from simple-root coordinates.
pub fn leq_coset(datum: &ChevalleyDatum, levi: &LeviSpec, a: &Weight, b: &Weight) -> bool {
    match datum.simple_coords(&(*b - *a)) {
        Some(c) => c.iter().enumerate().all(|(i, &ci)| ci >= 0 || levi.contains_simple(i)),
        None => false,
    }
}

/// Strict order: `a <= b` and the cosets differ.
pub fn lt_coset(datum: &ChevalleyDatum, levi: &LeviSpec, a: &Weight, b: &Weight) -> bool {
    leq_coset(datum, levi, a, b) && !leq_coset(datum, levi, b, a)
}

/// Whether `lambda` lies in the dot orbit of `mu` under `group`. Exact: the
/// finite part is enumerated and the translation part is a lattice test.
pub fn same_orbit(datum: &ChevalleyDatum, levi: &LeviSpec, group: Group, lambda: &Weight, mu: &Weight) -> bool {
    let simple = group.simple(datum, levi);
    let lattice = if group.affine() {
        Sublattice::from_weights(datum.d, &simple.iter().map(|&i| datum.simple(i)).collect::<Vec<_>>()).scaled(datum.p as i64)
    } else {
        Sublattice::zero(datum.d)
    };
    parabolic_elements(datum, &simple).iter().any(|w| lattice.contains(&(*lambda - w.dot(datum, mu))))
}

/// An element `w` of the finite part and `gamma` in the span of the
/// relevant simple roots with `lambda = w . mu + p gamma`.
pub fn connecting_element(
    datum: &ChevalleyDatum,
    levi: &LeviSpec,
    group: Group,
    lambda: &Weight,
    mu: &Weight,
) -> Option<(WeylElement, Vec<i64>)> {
    let simple = group.simple(datum, levi);
    let p = datum.p as i64;
    for w in parabolic_elements(datum, &simple) {
        let diff = *lambda - w.dot(datum, mu);
        if diff.is_zero() {
            return Some((w, vec![0; datum.n]));
        }
        if !group.affine() {
            continue;
        }
        if let Some(c) = datum.simple_coords(&diff) {
            let ok = c.iter().enumerate().all(|(i, &ci)| ci % p == 0 && (ci == 0 || simple.contains(&i)));
            if ok {
                return Some((w, c.iter().map(|x| x / p).collect()));
            }
        }
    }
    None
}

/// A cube `[lo, hi]^d` of weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub d: usize,
    pub lo: i32,
    pub hi: i32,
}

impl Window {
    pub fn new(d: usize, lo: i32, hi: i32) -> Self {
        Window { d, lo, hi }
    }

    pub fn contains(&self, w: &Weight) -> bool {
        w.coords().iter().all(|&x| x >= self.lo && x <= self.hi)
    }

    /// All weights in the window in lexicographic order.
    pub fn points(&self) -> Vec<Weight> {
        let mut out = Vec::new();
        if self.hi < self.lo {
            return out;
        }
        let mut cur = vec![self.lo; self.d];
        loop {
            out.push(Weight::new(&cur));
            let mut k = self.d;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < self.hi {
                    cur[k] += 1;
                    for c in cur.iter_mut().skip(k + 1) {
                        *c = self.lo;
                    }
                    break;
                }
            }
        }
    }
}

/// Orbit points inside `window`, sorted lexicographically.
pub fn dot_orbit(
    datum: &ChevalleyDatum,
    levi: &LeviSpec,
    group: Group,
    lambda: &Weight,
    window: &Window,
) -> Result<Vec<Weight>> {
    if !window.contains(lambda) {
        return Err(Error::WindowTooSmall(lambda.to_string()));
    }
    if !group.affine() {
        let set: BTreeSet<Weight> = parabolic_elements(datum, &group.simple(datum, levi))
            .iter()
            .map(|w| w.dot(datum, lambda))
            .filter(|w| window.contains(w))
            .collect();
        return Ok(set.into_iter().collect());
    }
    // translations by p alpha_i keep each W-image in a single pZ-coset; walk
    // each coset inside the window breadth-first, then add stray points by
    // direct membership tests
    let simple = group.simple(datum, levi);
    let steps: Vec<Weight> = simple
        .iter()
        .flat_map(|&i| {
            let s = (datum.p as i32) * datum.simple(i);
            [s, -s]
        })
        .collect();
    let mut seen: BTreeSet<Weight> = BTreeSet::new();
    let mut queue: VecDeque<Weight> = VecDeque::new();
    for w in parabolic_elements(datum, &simple) {
        let x = w.dot(datum, lambda);
        if window.contains(&x) && seen.insert(x) {
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for s in &steps {
            let y = x + *s;
            if window.contains(&y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    for y in window.points() {
        if !seen.contains(&y) && same_orbit(datum, levi, group, &y, lambda) {
            seen.insert(y);
        }
    }
    Ok(seen.into_iter().collect())
}

/// Canonical orbit representative: the least, over the finite part, of the
/// canonical representatives of `w . lambda` modulo the translation lattice.
pub fn fundamental_representative(datum: &ChevalleyDatum, levi: &LeviSpec, group: Group, lambda: &Weight) -> Weight {
    let simple = group.simple(datum, levi);
    let lattice = if group.affine() {
        Sublattice::from_weights(datum.d, &simple.iter().map(|&i| datum.simple(i)).collect::<Vec<_>>()).scaled(datum.p as i64)
    } else {
        Sublattice::zero(datum.d)
    };
    parabolic_elements(datum, &simple).iter().map(|w| lattice.reduce(&w.dot(datum, lambda))).min().unwrap()
}

/// `|W_J . d lambda|`: size of the dot orbit of `lambda mod p` under the
/// finite group generated by `simple`.
pub fn dot_orbit_size_mod_p(datum: &ChevalleyDatum, simple: &[usize], lambda: &Weight) -> usize {
    let set: HashSet<Weight> = parabolic_elements(datum, simple).iter().map(|w| w.dot(datum, lambda).mod_p(datum.p)).collect();
    set.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::build_gl;

    fn gl2() -> (ChevalleyDatum, LeviSpec) {
        let d = build_gl(2, 3).unwrap();
        let l = LeviSpec::full(&d);
        (d, l)
    }

    #[test]
    fn dot_examples() {
        let (d, _) = gl2();
        let s = AffineWord(vec![AffineGen::Reflect { root: 0, m: 0 }]);
        assert_eq!(dot_apply(&d, &s, &Weight::new(&[0, 0])), Weight::new(&[-1, 1]));
        let t = AffineWord(vec![AffineGen::Translate { root: 0, m: 1 }]);
        assert_eq!(dot_apply(&d, &t, &Weight::new(&[0, 0])), Weight::new(&[3, -3]));
        assert_eq!(dot_apply(&d, &AffineWord::identity(), &Weight::new(&[2, 5])), Weight::new(&[2, 5]));
    }

    #[test]
    fn orbit_examples() {
        let (d, l) = gl2();
        let win = Window::new(2, -6, 6);
        let o = dot_orbit(&d, &l, Group::WIp, &Weight::new(&[0, 0]), &win).unwrap();
        for w in [[0, 0], [-1, 1], [3, -3], [2, -2], [-3, 3]] {
            assert!(o.contains(&Weight::new(&w)), "{w:?}");
        }
        let e = LeviSpec::empty();
        assert_eq!(dot_orbit(&d, &e, Group::WIp, &Weight::new(&[1, 2]), &win).unwrap(), vec![Weight::new(&[1, 2])]);
        assert_eq!(dot_orbit(&d, &l, Group::W, &Weight::new(&[-1, 0]), &win).unwrap().len(), 1);
        assert!(matches!(dot_orbit(&d, &l, Group::W, &Weight::new(&[9, 0]), &win), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn same_orbit_examples() {
        let (d, l) = gl2();
        assert!(same_orbit(&d, &l, Group::WIp, &Weight::new(&[0, 0]), &Weight::new(&[-1, 1])));
        assert!(!same_orbit(&d, &l, Group::WIp, &Weight::new(&[0, 0]), &Weight::new(&[1, 0])));
    }

    #[test]
    fn coset_order_gl3() {
        let d = build_gl(3, 3).unwrap();
        let i1 = LeviSpec::new(&d, vec![0]).unwrap();
        let lam = Weight::new(&[1, 0, 2]);
        let a1 = d.simple(0);
        let a2 = d.simple(1);
        assert!(leq_coset(&d, &i1, &lam, &(lam + a2)));
        assert!(leq_coset(&d, &i1, &lam, &(lam + a1)));
        assert!(leq_coset(&d, &i1, &(lam + a1), &lam));
        assert!(!leq_coset(&d, &LeviSpec::empty(), &lam, &(lam - a2)));
    }

    #[test]
    fn split_and_join() {
        let (d, l) = gl2();
        let c = Cosets::new(&d, &l);
        assert_eq!(c.pzi(&Weight::new(&[3, -3])), c.pzi(&Weight::new(&[0, 0])));
        assert_ne!(c.pzi(&Weight::new(&[1, -1])), c.pzi(&Weight::new(&[0, 0])));
        let x = c.pzi(&Weight::new(&[4, -7]));
        let (zi, dl) = c.split(&x);
        assert_eq!(c.join(&zi, &dl), Some(x));
    }

    #[test]
    fn representatives_gl2() {
        let (d, l) = gl2();
        let r = |w: [i32; 2]| fundamental_representative(&d, &l, Group::WIp, &Weight::new(&w));
        assert_eq!(r([3, -3]), r([0, 0]));
        let x = r([2, -1]);
        assert_eq!(fundamental_representative(&d, &l, Group::WIp, &x), x);
        // distinct orbits on a 13x13 window give distinct representatives
        let win = Window::new(2, -6, 6);
        for a in win.points() {
            for b in win.points() {
                assert_eq!(r([a.coords()[0], a.coords()[1]]) == r([b.coords()[0], b.coords()[1]]), same_orbit(&d, &l, Group::WIp, &a, &b));
            }
        }
    }

    #[test]
    fn orbit_sizes_mod_p() {
        let (d, l) = gl2();
        assert_eq!(dot_orbit_size_mod_p(&d, &l.simple, &Weight::new(&[0, 0])), 2);
        assert_eq!(dot_orbit_size_mod_p(&d, &l.simple, &Weight::new(&[-1, 0])), 1);
    }
}
